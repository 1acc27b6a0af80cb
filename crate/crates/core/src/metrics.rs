//! Evaluation metrics for a fitted coefficient vector `e`.
//!
//! MAE and MSE are the l1 / squared-l2 norms of `A (x* - e)` over the test
//! rows (summed, not averaged, unless `per_sample` is set). SER is the mean
//! absolute difference of coefficient magnitudes, as a percentage. CLA is
//! the percentage of test rows whose predicted sign matches the label.

use ndarray::{ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SparcError};

pub const DEFAULT_DOF_TOLERANCE: f64 = 1e-4;
pub const DEFAULT_NNZ_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(rename = "MAE")]
    pub mae: Option<f64>,
    #[serde(rename = "MSE")]
    pub mse: Option<f64>,
    #[serde(rename = "SER")]
    pub ser: Option<f64>,
    #[serde(rename = "DoF")]
    pub dof: Option<f64>,
    #[serde(rename = "CLA")]
    pub cla: Option<f64>,
    #[serde(rename = "NNZ")]
    pub nnz: Option<f64>,
}

/// Metric identifiers, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "MAE")]
    Mae,
    #[serde(rename = "MSE")]
    Mse,
    #[serde(rename = "SER")]
    Ser,
    #[serde(rename = "DoF")]
    Dof,
    #[serde(rename = "CLA")]
    Cla,
    #[serde(rename = "NNZ")]
    Nnz,
}

impl Metric {
    pub const ALL: [Metric; 6] = [Metric::Mae, Metric::Mse, Metric::Ser, Metric::Dof, Metric::Cla, Metric::Nnz];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Mae => "MAE",
            Metric::Mse => "MSE",
            Metric::Ser => "SER",
            Metric::Dof => "DoF",
            Metric::Cla => "CLA",
            Metric::Nnz => "NNZ",
        }
    }
}

impl MetricsReport {
    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Mae => self.mae,
            Metric::Mse => self.mse,
            Metric::Ser => self.ser,
            Metric::Dof => self.dof,
            Metric::Cla => self.cla,
            Metric::Nnz => self.nnz,
        }
    }

    pub const CSV_HEADER: &'static str = "MAE,MSE,SER,DoF,CLA,NNZ";

    /// One CSV row in [`Self::CSV_HEADER`] order; unavailable metrics are empty.
    pub fn csv_row(&self) -> String {
        Metric::ALL
            .iter()
            .map(|m| self.get(*m).map(|v| v.to_string()).unwrap_or_default())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("metrics serialize")
    }
}

fn check_lengths(a: ArrayView2<'_, f64>, e: ArrayView1<'_, f64>) -> Result<()> {
    if a.ncols() != e.len() {
        return Err(SparcError::DimensionMismatch(format!(
            "test design has {} columns, estimate has length {}",
            a.ncols(),
            e.len()
        )));
    }
    Ok(())
}

fn prediction_gap(
    a: ArrayView2<'_, f64>,
    truth: Option<ArrayView1<'_, f64>>,
    e: ArrayView1<'_, f64>,
    name: &'static str,
) -> Result<ndarray::Array1<f64>> {
    let truth = truth.ok_or(SparcError::MetricUnavailable(name))?;
    check_lengths(a, e)?;
    if truth.len() != e.len() {
        return Err(SparcError::DimensionMismatch(format!(
            "ground truth has length {}, estimate has length {}",
            truth.len(),
            e.len()
        )));
    }
    Ok(a.dot(&(&truth - &e)))
}

/// `||A (x* - e)||_1`.
pub fn mae(a_test: ArrayView2<'_, f64>, truth: Option<ArrayView1<'_, f64>>, e: ArrayView1<'_, f64>) -> Result<f64> {
    Ok(prediction_gap(a_test, truth, e, "MAE")?.iter().map(|v| v.abs()).sum())
}

/// `||A (x* - e)||_2^2`.
pub fn mse(a_test: ArrayView2<'_, f64>, truth: Option<ArrayView1<'_, f64>>, e: ArrayView1<'_, f64>) -> Result<f64> {
    let gap = prediction_gap(a_test, truth, e, "MSE")?;
    Ok(gap.dot(&gap))
}

/// `100 * || |x*| - |e| ||_1 / p`.
pub fn ser(truth: Option<ArrayView1<'_, f64>>, e: ArrayView1<'_, f64>) -> Result<f64> {
    let truth = truth.ok_or(SparcError::MetricUnavailable("SER"))?;
    if truth.len() != e.len() || e.is_empty() {
        return Err(SparcError::DimensionMismatch(format!(
            "ground truth has length {}, estimate has length {}",
            truth.len(),
            e.len()
        )));
    }
    let total: f64 = truth.iter().zip(e).map(|(t, v)| (t.abs() - v.abs()).abs()).sum();
    Ok(100.0 * total / e.len() as f64)
}

/// Number of distinct magnitude classes among the entries counted by
/// [`nnz`] with the same `nnz_tol`. Sorted magnitudes chain into one class
/// while consecutive gaps stay within `tol * (1 + larger)`.
pub fn dof(e: ArrayView1<'_, f64>, tol: f64, nnz_tol: f64) -> usize {
    let mut mags: Vec<f64> = e.iter().map(|v| v.abs()).filter(|m| *m > nnz_tol).collect();
    if mags.is_empty() {
        return 0;
    }
    mags.sort_by(|a, b| a.partial_cmp(b).expect("finite magnitudes"));
    1 + mags
        .windows(2)
        .filter(|w| w[1] - w[0] > tol * (1.0 + w[1]))
        .count()
}

/// Percentage of rows where `sign(a_i^T e)` equals the label, sign(0) = +1.
pub fn cla(a_test: ArrayView2<'_, f64>, y_test: ArrayView1<'_, f64>, e: ArrayView1<'_, f64>) -> Result<f64> {
    check_lengths(a_test, e)?;
    if a_test.nrows() != y_test.len() {
        return Err(SparcError::DimensionMismatch(format!(
            "{} test rows but {} labels",
            a_test.nrows(),
            y_test.len()
        )));
    }
    if y_test.is_empty() {
        return Err(SparcError::invalid("classification accuracy needs at least one test row"));
    }
    let scores = a_test.dot(&e);
    let correct = scores
        .iter()
        .zip(y_test)
        .filter(|(s, y)| {
            let predicted = if **s >= 0.0 { 1.0 } else { -1.0 };
            predicted == **y
        })
        .count();
    Ok(100.0 * correct as f64 / y_test.len() as f64)
}

/// Count of `|e_i| > tol`.
pub fn nnz(e: ArrayView1<'_, f64>, tol: f64) -> usize {
    e.iter().filter(|v| v.abs() > tol).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricOptions {
    pub dof_tolerance: f64,
    pub nnz_tolerance: f64,
    /// Divide MAE and MSE by the number of test rows.
    pub per_sample: bool,
}

impl Default for MetricOptions {
    fn default() -> Self {
        MetricOptions {
            dof_tolerance: DEFAULT_DOF_TOLERANCE,
            nnz_tolerance: DEFAULT_NNZ_TOLERANCE,
            per_sample: false,
        }
    }
}

/// Computes every metric available for the data. SER needs ground truth;
/// without it, regression MAE and MSE are taken on the test residual
/// `y - A e`. CLA needs classification labels.
pub fn evaluate(
    a_test: ArrayView2<'_, f64>,
    y_test: ArrayView1<'_, f64>,
    truth: Option<ArrayView1<'_, f64>>,
    e: ArrayView1<'_, f64>,
    classification: bool,
    options: &MetricOptions,
) -> Result<MetricsReport> {
    check_lengths(a_test, e)?;
    let scale = if options.per_sample && a_test.nrows() > 0 {
        1.0 / a_test.nrows() as f64
    } else {
        1.0
    };
    let (mae_v, mse_v, ser_v) = match truth {
        Some(_) => (
            Some(scale * mae(a_test, truth, e)?),
            Some(scale * mse(a_test, truth, e)?),
            Some(ser(truth, e)?),
        ),
        // without ground truth, regression errors fall back to y - A e
        None if !classification => {
            if a_test.nrows() != y_test.len() {
                return Err(SparcError::DimensionMismatch(format!(
                    "{} test rows but {} responses",
                    a_test.nrows(),
                    y_test.len()
                )));
            }
            let r = &y_test - &a_test.dot(&e);
            (
                Some(scale * r.iter().map(|v| v.abs()).sum::<f64>()),
                Some(scale * r.dot(&r)),
                None,
            )
        }
        None => (None, None, None),
    };
    Ok(MetricsReport {
        mae: mae_v,
        mse: mse_v,
        ser: ser_v,
        dof: Some(dof(e, options.dof_tolerance, options.nnz_tolerance) as f64),
        cla: if classification { Some(cla(a_test, y_test, e)?) } else { None },
        nnz: Some(nnz(e, options.nnz_tolerance) as f64),
    })
}
