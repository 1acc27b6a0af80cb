//! Datasets: the grouped-covariates synthetic generator, CSV ingestion and
//! output, seeded train/validation/test splitting and column normalization.

use std::collections::BTreeSet;
use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SparcError};

/// Seedable generator used by every randomized routine in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Regression,
    Classification,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Regression => "regression",
            Task::Classification => "classification",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }

    pub fn parse(s: &str) -> Option<Split> {
        match s.trim() {
            "train" => Some(Split::Train),
            "validation" => Some(Split::Validation),
            "test" => Some(Split::Test),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub a: Array2<f64>,
    pub y: Array1<f64>,
    pub task: Task,
    pub truth: Option<Array1<f64>>,
    pub splits: Vec<Split>,
    pub feature_names: Vec<String>,
    pub label_name: String,
}

impl Dataset {
    /// Builds a dataset with every row in the training split.
    pub fn new(a: Array2<f64>, y: Array1<f64>, task: Task) -> Result<Self> {
        let n = a.nrows();
        let feature_names = (1..=a.ncols()).map(|j| format!("x{j}")).collect();
        let ds = Dataset {
            a,
            y,
            task,
            truth: None,
            splits: vec![Split::Train; n],
            feature_names,
            label_name: "label".to_string(),
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn n_samples(&self) -> usize {
        self.a.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.a.ncols()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.a.nrows();
        if self.y.len() != n || self.splits.len() != n {
            return Err(SparcError::DimensionMismatch(format!(
                "{} rows, {} responses, {} split labels",
                n,
                self.y.len(),
                self.splits.len()
            )));
        }
        if self.feature_names.len() != self.a.ncols() {
            return Err(SparcError::DimensionMismatch(format!(
                "{} columns but {} feature names",
                self.a.ncols(),
                self.feature_names.len()
            )));
        }
        if let Some(truth) = &self.truth {
            if truth.len() != self.a.ncols() {
                return Err(SparcError::DimensionMismatch(format!(
                    "ground truth has length {}, expected {}",
                    truth.len(),
                    self.a.ncols()
                )));
            }
        }
        if self.task == Task::Classification && self.y.iter().any(|&v| v != 1.0 && v != -1.0) {
            return Err(SparcError::invalid("classification responses must be -1 or +1"));
        }
        Ok(())
    }

    pub fn rows(&self, split: Split) -> Vec<usize> {
        self.splits
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == split)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn split_sizes(&self) -> (usize, usize, usize) {
        (
            self.rows(Split::Train).len(),
            self.rows(Split::Validation).len(),
            self.rows(Split::Test).len(),
        )
    }

    /// Design rows and responses of one split.
    pub fn subset(&self, split: Split) -> (Array2<f64>, Array1<f64>) {
        let rows = self.rows(split);
        (self.a.select(Axis(0), &rows), self.y.select(Axis(0), &rows))
    }

    /// Keeps only the given columns, in the given order.
    pub fn select_features(&self, columns: &[usize]) -> Dataset {
        Dataset {
            a: self.a.select(Axis(1), columns),
            y: self.y.clone(),
            task: self.task,
            truth: self.truth.as_ref().map(|t| t.select(Axis(0), columns)),
            splits: self.splits.clone(),
            feature_names: columns.iter().map(|&j| self.feature_names[j].clone()).collect(),
            label_name: self.label_name.clone(),
        }
    }
}

/// Grouped-covariates regression benchmark: `groups` blocks of `group_size`
/// correlated features sharing a latent factor, then `irrelevant` independent
/// features. The first `groups * group_size` coefficients equal `signal`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub groups: usize,
    pub group_size: usize,
    pub irrelevant: usize,
    pub signal: f64,
    pub within_group_variance: f64,
    pub noise_variance: f64,
    pub n_train: usize,
    pub n_validation: usize,
    pub n_test: usize,
    pub normalization: Normalization,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            groups: 3,
            group_size: 5,
            irrelevant: 25,
            signal: 3.0,
            within_group_variance: 0.16,
            noise_variance: 0.01,
            n_train: 20,
            n_validation: 40,
            n_test: 200,
            normalization: Normalization::L2,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn n_features(&self) -> usize {
        self.groups * self.group_size + self.irrelevant
    }

    pub fn n_samples(&self) -> usize {
        self.n_train + self.n_validation + self.n_test
    }

    pub fn with_seed(self, seed: u64) -> Self {
        SyntheticSpec { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.within_group_variance >= 0.0 && self.noise_variance >= 0.0) {
            return Err(SparcError::invalid("variances must be non-negative"));
        }
        if self.n_train == 0 || self.n_validation == 0 || self.n_test == 0 {
            return Err(SparcError::invalid("sample counts must be at least 1"));
        }
        if self.n_features() == 0 {
            return Err(SparcError::invalid("the design needs at least one feature"));
        }
        if !self.signal.is_finite() {
            return Err(SparcError::invalid("signal value must be finite"));
        }
        Ok(())
    }

    /// Planted coefficient vector.
    pub fn truth(&self) -> Array1<f64> {
        let relevant = self.groups * self.group_size;
        Array1::from_shape_fn(self.n_features(), |j| if j < relevant { self.signal } else { 0.0 })
    }
}

/// Draws raw grouped features: one latent N(0,1) factor per group per row.
fn grouped_features(
    rng: &mut SeededRng,
    n: usize,
    groups: usize,
    group_size: usize,
    irrelevant: usize,
    within_group_sd: f64,
) -> Array2<f64> {
    let p = groups * group_size + irrelevant;
    let mut a = Array2::zeros((n, p));
    for mut row in a.rows_mut() {
        for g in 0..groups {
            let z: f64 = rng.sample(StandardNormal);
            for j in 0..group_size {
                let eps: f64 = rng.sample(StandardNormal);
                row[g * group_size + j] = z + within_group_sd * eps;
            }
        }
        for j in groups * group_size..p {
            row[j] = rng.sample(StandardNormal);
        }
    }
    a
}

fn numbered_features(p: usize) -> Vec<String> {
    (1..=p).map(|j| format!("x{j}")).collect()
}

/// Generates the grouped regression benchmark. Columns are normalized over
/// the training rows (unit l2 norm by default) before the response is
/// formed, so the planted coefficients live in normalized coordinates.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = seeded_rng(spec.seed);
    let n = spec.n_samples();
    let raw = grouped_features(
        &mut rng,
        n,
        spec.groups,
        spec.group_size,
        spec.irrelevant,
        spec.within_group_variance.sqrt(),
    );
    let splits: Vec<Split> = std::iter::repeat_n(Split::Train, spec.n_train)
        .chain(std::iter::repeat_n(Split::Validation, spec.n_validation))
        .chain(std::iter::repeat_n(Split::Test, spec.n_test))
        .collect();
    let train: Vec<usize> = (0..spec.n_train).collect();
    let (a, _) = spec.normalization.apply(raw.view(), &train)?;
    let truth = spec.truth();
    let noise_sd = spec.noise_variance.sqrt();
    let mut y = a.dot(&truth);
    for v in y.iter_mut() {
        let w: f64 = rng.sample(StandardNormal);
        *v += noise_sd * w;
    }
    Ok(Dataset {
        feature_names: numbered_features(spec.n_features()),
        a,
        y,
        task: Task::Regression,
        truth: Some(truth),
        splits,
        label_name: "y".to_string(),
    })
}

/// Classification analogue of [`SyntheticSpec`]: labels are the sign of a
/// planted linear score on grouped features plus Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationSpec {
    pub n_samples: usize,
    pub groups: usize,
    pub group_size: usize,
    pub irrelevant: usize,
    pub signal: f64,
    pub within_group_variance: f64,
    pub noise_variance: f64,
    pub fractions: (f64, f64, f64),
    pub normalization: Normalization,
    pub seed: u64,
}

impl Default for ClassificationSpec {
    fn default() -> Self {
        ClassificationSpec {
            n_samples: 300,
            groups: 3,
            group_size: 5,
            irrelevant: 85,
            signal: 3.0,
            within_group_variance: 0.16,
            noise_variance: 0.01,
            fractions: (0.5, 0.3, 0.2),
            normalization: Normalization::L2,
            seed: 0,
        }
    }
}

impl ClassificationSpec {
    pub fn n_features(&self) -> usize {
        self.groups * self.group_size + self.irrelevant
    }

    pub fn with_seed(self, seed: u64) -> Self {
        ClassificationSpec { seed, ..self }
    }

    pub fn truth(&self) -> Array1<f64> {
        let relevant = self.groups * self.group_size;
        Array1::from_shape_fn(self.n_features(), |j| if j < relevant { self.signal } else { 0.0 })
    }
}

/// Generates a grouped classification set. Rows are split at random, columns
/// normalized on the training rows, and `y = sign(A x* + w)` with sign(0) = +1.
pub fn generate_classification(spec: &ClassificationSpec) -> Result<Dataset> {
    if !(spec.within_group_variance >= 0.0 && spec.noise_variance >= 0.0) {
        return Err(SparcError::invalid("variances must be non-negative"));
    }
    if spec.n_features() == 0 || spec.n_samples == 0 {
        return Err(SparcError::invalid("the design needs at least one row and column"));
    }
    let mut rng = seeded_rng(spec.seed);
    let raw = grouped_features(
        &mut rng,
        spec.n_samples,
        spec.groups,
        spec.group_size,
        spec.irrelevant,
        spec.within_group_variance.sqrt(),
    );
    let splits = split_assignment(spec.n_samples, spec.fractions, &mut rng)?;
    let train: Vec<usize> = (0..spec.n_samples).filter(|&i| splits[i] == Split::Train).collect();
    let (a, _) = spec.normalization.apply(raw.view(), &train)?;
    let truth = spec.truth();
    let noise_sd = spec.noise_variance.sqrt();
    let score = a.dot(&truth);
    let y = score.mapv(|s| {
        let w: f64 = rng.sample(StandardNormal);
        if s + noise_sd * w >= 0.0 {
            1.0
        } else {
            -1.0
        }
    });
    Ok(Dataset {
        feature_names: numbered_features(spec.n_features()),
        a,
        y,
        task: Task::Classification,
        truth: Some(truth),
        splits,
        label_name: "label".to_string(),
    })
}

fn check_fractions(fractions: (f64, f64, f64)) -> Result<()> {
    let (a, b, c) = fractions;
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(SparcError::invalid(format!(
            "split fractions must all be positive, got ({a}, {b}, {c})"
        )));
    }
    if ((a + b + c) - 1.0).abs() > 1e-9 {
        return Err(SparcError::invalid(format!(
            "split fractions must sum to 1, got {}",
            a + b + c
        )));
    }
    Ok(())
}

/// Split sizes `(floor(f_train n), floor(f_val n), remainder)`.
pub fn split_sizes(n: usize, fractions: (f64, f64, f64)) -> Result<(usize, usize, usize)> {
    check_fractions(fractions)?;
    let train = (fractions.0 * n as f64).floor() as usize;
    let validation = (fractions.1 * n as f64).floor() as usize;
    let test = n.saturating_sub(train + validation);
    if train == 0 || validation == 0 || test == 0 {
        return Err(SparcError::invalid(format!(
            "split of {n} rows by {fractions:?} leaves an empty partition ({train}, {validation}, {test})"
        )));
    }
    Ok((train, validation, test))
}

fn split_assignment(n: usize, fractions: (f64, f64, f64), rng: &mut SeededRng) -> Result<Vec<Split>> {
    let (train, validation, _) = split_sizes(n, fractions)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut splits = vec![Split::Test; n];
    for (pos, &row) in order.iter().enumerate() {
        splits[row] = if pos < train {
            Split::Train
        } else if pos < train + validation {
            Split::Validation
        } else {
            Split::Test
        };
    }
    Ok(splits)
}

/// Reassigns split labels by a seeded uniform permutation of the rows.
pub fn split_dataset(ds: &Dataset, fractions: (f64, f64, f64), seed: u64) -> Result<Dataset> {
    let mut rng = seeded_rng(seed);
    let splits = split_assignment(ds.n_samples(), fractions, &mut rng)?;
    Ok(Dataset {
        splits,
        ..ds.clone()
    })
}

fn column_norms(a: ArrayView2<'_, f64>, rows: &[usize]) -> Array1<f64> {
    Array1::from_shape_fn(a.ncols(), |j| {
        rows.iter().map(|&i| a[[i, j]] * a[[i, j]]).sum::<f64>().sqrt()
    })
}

/// Scales every column to unit l2 norm measured on `fit_rows` (all rows when
/// empty). Returns the scaled matrix and the per-column norms.
pub fn normalize_columns(a: ArrayView2<'_, f64>, fit_rows: &[usize]) -> Result<(Array2<f64>, Array1<f64>)> {
    let all: Vec<usize>;
    let rows = if fit_rows.is_empty() {
        all = (0..a.nrows()).collect();
        &all
    } else {
        fit_rows
    };
    let scale = column_norms(a, rows);
    if let Some(j) = scale.iter().position(|&s| !(s > 0.0) || !s.is_finite()) {
        return Err(SparcError::invalid(format!(
            "column {} has zero norm on the fitting rows",
            j + 1
        )));
    }
    let mut out = a.to_owned();
    for (mut col, s) in out.columns_mut().into_iter().zip(scale.iter()) {
        col.mapv_inplace(|v| v / s);
    }
    Ok((out, scale))
}

/// Centers and scales every column to zero mean and unit standard deviation
/// on `fit_rows`. Returns the matrix, the means and the standard deviations.
pub fn standardize_columns(
    a: ArrayView2<'_, f64>,
    fit_rows: &[usize],
) -> Result<(Array2<f64>, Array1<f64>, Array1<f64>)> {
    if fit_rows.len() < 2 {
        return Err(SparcError::invalid("standardization needs at least two fitting rows"));
    }
    let m = fit_rows.len() as f64;
    let mean = Array1::from_shape_fn(a.ncols(), |j| fit_rows.iter().map(|&i| a[[i, j]]).sum::<f64>() / m);
    let sd = Array1::from_shape_fn(a.ncols(), |j| {
        (fit_rows.iter().map(|&i| (a[[i, j]] - mean[j]).powi(2)).sum::<f64>() / m).sqrt()
    });
    if let Some(j) = sd.iter().position(|&s| !(s > 0.0)) {
        return Err(SparcError::invalid(format!(
            "column {} is constant on the fitting rows",
            j + 1
        )));
    }
    let mut out = a.to_owned();
    for (j, mut col) in out.columns_mut().into_iter().enumerate() {
        col.mapv_inplace(|v| (v - mean[j]) / sd[j]);
    }
    Ok((out, mean, sd))
}

/// Column scaling applied before fitting, with statistics from training rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Unit l2 norm per column.
    #[default]
    L2,
    /// Zero mean, unit standard deviation per column.
    ZScore,
    None,
}

impl Normalization {
    pub fn parse(s: &str) -> Option<Normalization> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l2" => Some(Normalization::L2),
            "zscore" | "z-score" => Some(Normalization::ZScore),
            "none" => Some(Normalization::None),
            _ => None,
        }
    }

    /// Transforms `a` with statistics from `fit_rows`. Returns the matrix and
    /// the per-column divisor; coefficients fitted on the result map back to
    /// the original units by dividing by it.
    pub fn apply(self, a: ArrayView2<'_, f64>, fit_rows: &[usize]) -> Result<(Array2<f64>, Array1<f64>)> {
        match self {
            Normalization::L2 => normalize_columns(a, fit_rows),
            Normalization::ZScore => {
                let (z, _, sd) = standardize_columns(a, fit_rows)?;
                Ok((z, sd))
            }
            Normalization::None => Ok((a.to_owned(), Array1::ones(a.ncols()))),
        }
    }
}

/// Indices (ascending) of the `m` columns with the largest absolute Pearson
/// correlation with `y` over `rows`; ties go to the lower index.
pub fn screen_by_correlation(
    a: ArrayView2<'_, f64>,
    y: ArrayView1<'_, f64>,
    rows: &[usize],
    m: usize,
) -> Result<Vec<usize>> {
    if m == 0 || m > a.ncols() {
        return Err(SparcError::invalid(format!(
            "screen size must be in 1..={}, got {m}",
            a.ncols()
        )));
    }
    if rows.is_empty() {
        return Err(SparcError::invalid("screening needs at least one row"));
    }
    let k = rows.len() as f64;
    let y_mean = rows.iter().map(|&i| y[i]).sum::<f64>() / k;
    let y_ss: f64 = rows.iter().map(|&i| (y[i] - y_mean).powi(2)).sum();
    let scores: Vec<f64> = (0..a.ncols())
        .map(|j| {
            let mean = rows.iter().map(|&i| a[[i, j]]).sum::<f64>() / k;
            let mut cross = 0.0;
            let mut ss = 0.0;
            for &i in rows {
                let d = a[[i, j]] - mean;
                cross += d * (y[i] - y_mean);
                ss += d * d;
            }
            let denom = (ss * y_ss).sqrt();
            if denom > 0.0 {
                (cross / denom).abs()
            } else {
                0.0
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..a.ncols()).collect();
    order.sort_by(|&i, &j| scores[j].partial_cmp(&scores[i]).unwrap_or(std::cmp::Ordering::Equal));
    let mut keep = order[..m].to_vec();
    keep.sort_unstable();
    Ok(keep)
}

/// Where the response lives in a CSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    /// The last column, or the one before a trailing split column.
    Last,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOptions {
    pub label: LabelColumn,
    pub task: Task,
    /// Optional column holding `train` / `validation` / `test`.
    pub split_column: Option<String>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            label: LabelColumn::Last,
            task: Task::Regression,
            split_column: Some("split".to_string()),
        }
    }
}

/// Reads a header + numeric-rows CSV file.
///
/// The label column becomes `y` and the remaining columns (except the
/// optional split column) become `A` in header order. For classification
/// the two distinct raw labels map to -1 (lexicographically smaller) and +1.
pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| SparcError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let parse_err = |line: u64, message: String| SparcError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.is_empty() || header.iter().all(|h| h.is_empty()) {
        return Err(parse_err(1, "missing header row".into()));
    }
    let split_named = options
        .split_column
        .as_ref()
        .and_then(|name| header.iter().position(|h| h == name));
    let label_idx = match &options.label {
        // a trailing split column is not the label
        LabelColumn::Last => match split_named {
            Some(s) if s == header.len() - 1 && header.len() > 1 => header.len() - 2,
            _ => header.len() - 1,
        },
        LabelColumn::Name(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_err(1, format!("label column '{name}' not found in header")))?,
    };
    let split_idx = split_named.filter(|&i| i != label_idx);
    let feature_idx: Vec<usize> = (0..header.len())
        .filter(|&i| i != label_idx && Some(i) != split_idx)
        .collect();

    let mut values = Vec::new();
    let mut raw_labels = Vec::new();
    let mut splits = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(parse_err(
                line,
                format!("row has {} fields but the header has {}", record.len(), header.len()),
            ));
        }
        for &j in &feature_idx {
            let cell = &record[j];
            let v: f64 = cell.parse().map_err(|_| {
                parse_err(line, format!("non-numeric value '{cell}' in column '{}'", header[j]))
            })?;
            values.push(v);
        }
        raw_labels.push((line, record[label_idx].to_string()));
        splits.push(match split_idx {
            Some(s) => Split::parse(&record[s]).ok_or_else(|| {
                parse_err(line, format!("unknown split label '{}'", &record[s]))
            })?,
            None => Split::Train,
        });
    }

    let y = match options.task {
        Task::Regression => raw_labels
            .iter()
            .map(|(line, cell)| {
                cell.parse::<f64>().map_err(|_| {
                    parse_err(*line, format!("non-numeric label '{cell}' in column '{}'", header[label_idx]))
                })
            })
            .collect::<Result<Vec<f64>>>()?,
        Task::Classification => {
            let classes: BTreeSet<&str> = raw_labels.iter().map(|(_, c)| c.as_str()).collect();
            if classes.len() > 2 {
                let mut seen: Vec<&str> = Vec::new();
                for (line, cell) in &raw_labels {
                    if !seen.contains(&cell.as_str()) {
                        if seen.len() == 2 {
                            return Err(parse_err(
                                *line,
                                format!(
                                    "third class '{cell}' in label column '{}' (classification needs exactly two)",
                                    header[label_idx]
                                ),
                            ));
                        }
                        seen.push(cell);
                    }
                }
            }
            let negative = classes.iter().next().copied().unwrap_or_default().to_string();
            raw_labels
                .iter()
                .map(|(_, c)| if *c == negative && classes.len() == 2 { -1.0 } else { 1.0 })
                .collect()
        }
    };

    if values.iter().any(|v: &f64| !v.is_finite()) || y.iter().any(|v| !v.is_finite()) {
        return Err(parse_err(0, "non-finite numeric value".into()));
    }
    let n = y.len();
    let a = Array2::from_shape_vec((n, feature_idx.len()), values)
        .map_err(|e| SparcError::DimensionMismatch(e.to_string()))?;
    let ds = Dataset {
        a,
        y: Array1::from(y),
        task: options.task,
        truth: None,
        splits,
        feature_names: feature_idx.iter().map(|&j| header[j].clone()).collect(),
        label_name: header[label_idx].clone(),
    };
    ds.validate()?;
    Ok(ds)
}

/// Writes the dataset in the format [`load_csv`] reads, label last, with an
/// optional trailing `split` column.
pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>, include_split: bool) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| SparcError::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    let io = |e| SparcError::io(path, e);
    let mut header: Vec<&str> = ds.feature_names.iter().map(String::as_str).collect();
    header.push(&ds.label_name);
    if include_split {
        header.push("split");
    }
    writeln!(out, "{}", header.join(",")).map_err(io)?;
    for (i, row) in ds.a.rows().into_iter().enumerate() {
        let mut cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        cells.push(ds.y[i].to_string());
        if include_split {
            cells.push(ds.splits[i].name().to_string());
        }
        writeln!(out, "{}", cells.join(",")).map_err(io)?;
    }
    out.flush().map_err(io)
}
