use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = SparcError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum SparcError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("solver diverged at iteration {iteration}: {detail}")]
    Divergence { iteration: usize, detail: String },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("metric {0} is unavailable for this dataset")]
    MetricUnavailable(&'static str),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl SparcError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        SparcError::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SparcError::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn ensure_finite(values: impl IntoIterator<Item = f64>, what: &str) -> Result<()> {
    for (i, v) in values.into_iter().enumerate() {
        if !v.is_finite() {
            return Err(SparcError::invalid(format!(
                "{what} contains a non-finite value ({v}) at index {i}"
            )));
        }
    }
    Ok(())
}
