//! Proximity operators and penalty evaluators for the LASSO, elastic net,
//! OSCAR and SPARC regularizers.
//!
//! OSCAR's pairwise-max term is handled in its ordered-weighted form: after
//! sorting magnitudes in decreasing order, the k-th largest entry (out of d)
//! is the max of exactly `d - k` pairs, so
//!
//! ```text
//! lambda1 * |x|_1 + lambda2 * sum_{i<j} max(|x_i|, |x_j|) = sum_k w_k |x|_[k]
//! w_k = lambda1 + lambda2 * (d - k)
//! ```
//!
//! The prox of that sorted-weighted norm is: subtract the weights from the
//! sorted magnitudes, project onto the non-increasing cone (pool adjacent
//! violators), clip at zero, then restore signs and order. SPARC restricts
//! the same operator to the K largest entries and zeroes the rest.

use std::cmp::Ordering;
use std::fmt;

use ndarray::{Array1, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Result, SparcError};

/// The four regularizer families, tagged with their parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Regularizer {
    /// `lambda1 * ||x||_1`
    Lasso { lambda1: f64 },
    /// `lambda1 * ||x||_1 + lambda2 / 2 * ||x||_2^2`
    ElasticNet { lambda1: f64, lambda2: f64 },
    /// `lambda1 * ||x||_1 + lambda2 * sum_{i<j} max(|x_i|, |x_j|)`
    Oscar { lambda1: f64, lambda2: f64 },
    /// Indicator of `||x||_0 <= k` plus `lambda * sum_{i<j in top-k} max(|x_i|, |x_j|)`
    Sparc { lambda: f64, k: usize },
}

/// Regularizer family without parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Lasso,
    ElasticNet,
    Oscar,
    Sparc,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Lasso,
        Method::ElasticNet,
        Method::Oscar,
        Method::Sparc,
    ];

    /// Short identifier used on the command line.
    pub fn key(self) -> &'static str {
        match self {
            Method::Lasso => "lasso",
            Method::ElasticNet => "en",
            Method::Oscar => "oscar",
            Method::Sparc => "sparc",
        }
    }

    /// Column label used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            Method::Lasso => "LASSO",
            Method::ElasticNet => "EN",
            Method::Oscar => "OSCAR",
            Method::Sparc => "SPARC",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lasso" => Some(Method::Lasso),
            "en" | "elastic_net" | "elasticnet" | "elastic-net" => Some(Method::ElasticNet),
            "oscar" => Some(Method::Oscar),
            "sparc" => Some(Method::Sparc),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn check_param(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(SparcError::invalid(format!(
            "{name} must be finite and non-negative, got {value}"
        )));
    }
    Ok(())
}

impl Regularizer {
    pub fn method(&self) -> Method {
        match self {
            Regularizer::Lasso { .. } => Method::Lasso,
            Regularizer::ElasticNet { .. } => Method::ElasticNet,
            Regularizer::Oscar { .. } => Method::Oscar,
            Regularizer::Sparc { .. } => Method::Sparc,
        }
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self, Regularizer::Sparc { .. })
    }

    /// Checks the parameter invariants that do not depend on the vector length.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Regularizer::Lasso { lambda1 } => check_param("lambda1", lambda1),
            Regularizer::ElasticNet { lambda1, lambda2 } | Regularizer::Oscar { lambda1, lambda2 } => {
                check_param("lambda1", lambda1)?;
                check_param("lambda2", lambda2)
            }
            Regularizer::Sparc { lambda, k } => {
                check_param("lambda", lambda)?;
                if k == 0 {
                    return Err(SparcError::invalid("K must be a positive integer"));
                }
                Ok(())
            }
        }
    }

    /// Checks the parameters against a vector of length `p`.
    pub fn validate_for_dim(&self, p: usize) -> Result<()> {
        self.validate()?;
        if let Regularizer::Sparc { k, .. } = *self {
            check_k(k, p)?;
        }
        Ok(())
    }

    /// The regularizer `phi / alpha`. K is untouched: the sparsity indicator
    /// is invariant under positive scaling.
    pub fn scaled(&self, alpha: f64) -> Result<Regularizer> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(SparcError::invalid(format!(
                "scale alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(match *self {
            Regularizer::Lasso { lambda1 } => Regularizer::Lasso {
                lambda1: lambda1 / alpha,
            },
            Regularizer::ElasticNet { lambda1, lambda2 } => Regularizer::ElasticNet {
                lambda1: lambda1 / alpha,
                lambda2: lambda2 / alpha,
            },
            Regularizer::Oscar { lambda1, lambda2 } => Regularizer::Oscar {
                lambda1: lambda1 / alpha,
                lambda2: lambda2 / alpha,
            },
            Regularizer::Sparc { lambda, k } => Regularizer::Sparc {
                lambda: lambda / alpha,
                k,
            },
        })
    }

    pub fn penalty(&self, x: ArrayView1<'_, f64>) -> Result<f64> {
        penalty_value(self, x)
    }

    pub fn prox(&self, v: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        prox_scaled(self, v, 1.0)
    }
}

impl fmt::Display for Regularizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Regularizer::Lasso { lambda1 } => write!(f, "lasso(lambda1={lambda1})"),
            Regularizer::ElasticNet { lambda1, lambda2 } => {
                write!(f, "en(lambda1={lambda1}, lambda2={lambda2})")
            }
            Regularizer::Oscar { lambda1, lambda2 } => {
                write!(f, "oscar(lambda1={lambda1}, lambda2={lambda2})")
            }
            Regularizer::Sparc { lambda, k } => write!(f, "sparc(lambda={lambda}, k={k})"),
        }
    }
}

fn check_k(k: usize, p: usize) -> Result<()> {
    if k < 1 || k > p {
        return Err(SparcError::invalid(format!(
            "K must satisfy 1 <= K <= p (K = {k}, p = {p})"
        )));
    }
    Ok(())
}

/// Magnitudes of a vector sorted in decreasing order, with the signs and
/// positions needed to undo the sort. Equal magnitudes keep index order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedMagnitudeView {
    pub magnitudes: Vec<f64>,
    pub signs: Vec<f64>,
    /// `permutation[r]` is the original position of the entry with rank `r`.
    pub permutation: Vec<usize>,
}

impl SortedMagnitudeView {
    pub fn new(v: ArrayView1<'_, f64>) -> Self {
        let mut permutation: Vec<usize> = (0..v.len()).collect();
        // stable sort: ties resolve to the lower index
        permutation.sort_by(|&i, &j| {
            v[j].abs()
                .partial_cmp(&v[i].abs())
                .unwrap_or(Ordering::Equal)
        });
        let magnitudes = permutation.iter().map(|&i| v[i].abs()).collect();
        let signs = permutation.iter().map(|&i| sign(v[i])).collect();
        SortedMagnitudeView {
            magnitudes,
            signs,
            permutation,
        }
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    /// Scatters rank-ordered magnitudes back to their original positions and
    /// re-applies the signs.
    pub fn restore(&self, magnitudes: &[f64]) -> Array1<f64> {
        debug_assert_eq!(magnitudes.len(), self.len());
        let mut out = Array1::zeros(self.len());
        for (rank, &m) in magnitudes.iter().enumerate() {
            out[self.permutation[rank]] = self.signs[rank] * m;
        }
        out
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Non-increasing, non-negative per-rank weights of an ordered-weighted l1 norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSequence {
    weights: Vec<f64>,
}

impl WeightSequence {
    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `sum_k w_k * m_k` for magnitudes already sorted in decreasing order.
    pub fn apply_sorted(&self, sorted_magnitudes: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(sorted_magnitudes)
            .map(|(w, m)| w * m)
            .sum()
    }
}

/// OSCAR weights `w_k = lambda1 + lambda2 * (d - k)` for ranks `k = 1..=d`.
pub fn owl_weights(lambda1: f64, lambda2: f64, d: usize) -> Result<WeightSequence> {
    check_param("lambda1", lambda1)?;
    check_param("lambda2", lambda2)?;
    if d == 0 {
        return Err(SparcError::invalid("weight sequence length must be at least 1"));
    }
    let weights = (1..=d)
        .map(|k| lambda1 + lambda2 * (d - k) as f64)
        .collect();
    Ok(WeightSequence { weights })
}

/// Componentwise `sign(v_i) * max(|v_i| - t, 0)`.
pub fn soft_threshold(v: ArrayView1<'_, f64>, t: f64) -> Result<Array1<f64>> {
    ensure_finite(v.iter().copied(), "input vector")?;
    check_param("threshold", t)?;
    Ok(v.mapv(|x| sign(x) * (x.abs() - t).max(0.0)))
}

pub fn prox_elastic_net(v: ArrayView1<'_, f64>, lambda1: f64, lambda2: f64) -> Result<Array1<f64>> {
    check_param("lambda1", lambda1)?;
    check_param("lambda2", lambda2)?;
    let shrunk = soft_threshold(v, lambda1)?;
    Ok(shrunk / (1.0 + lambda2))
}

/// Pool adjacent violators for the non-increasing cone.
fn pava_decreasing(u: &[f64]) -> Vec<f64> {
    // (sum, width) per block
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(u.len());
    for &value in u {
        blocks.push((value, 1));
        while blocks.len() >= 2 {
            let (top_sum, top_w) = blocks[blocks.len() - 1];
            let (prev_sum, prev_w) = blocks[blocks.len() - 2];
            if top_sum / top_w as f64 > prev_sum / prev_w as f64 {
                blocks.pop();
                let last = blocks.len() - 1;
                blocks[last] = (prev_sum + top_sum, prev_w + top_w);
            } else {
                break;
            }
        }
    }
    let mut out = Vec::with_capacity(u.len());
    for (sum, width) in blocks {
        let mean = sum / width as f64;
        out.extend(std::iter::repeat_n(mean, width));
    }
    out
}

/// Euclidean projection onto `{z : z_1 >= z_2 >= ... >= z_n}`.
pub fn isotonic_decreasing(u: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
    ensure_finite(u.iter().copied(), "input vector")?;
    let values: Vec<f64> = u.iter().copied().collect();
    Ok(Array1::from(pava_decreasing(&values)))
}

pub fn prox_oscar(v: ArrayView1<'_, f64>, lambda1: f64, lambda2: f64) -> Result<Array1<f64>> {
    ensure_finite(v.iter().copied(), "input vector")?;
    check_param("lambda1", lambda1)?;
    check_param("lambda2", lambda2)?;
    if v.is_empty() {
        return Ok(Array1::zeros(0));
    }
    let view = SortedMagnitudeView::new(v);
    let weights = owl_weights(lambda1, lambda2, view.len())?;
    let shifted: Vec<f64> = view
        .magnitudes
        .iter()
        .zip(weights.as_slice())
        .map(|(m, w)| m - w)
        .collect();
    let clipped: Vec<f64> = pava_decreasing(&shifted)
        .into_iter()
        .map(|z| z.max(0.0))
        .collect();
    Ok(view.restore(&clipped))
}

/// Indices (ascending) of the `k` largest entries in magnitude; ties go to
/// the lower index.
pub fn top_k_support(v: ArrayView1<'_, f64>, k: usize) -> Result<Vec<usize>> {
    check_k(k, v.len())?;
    let view = SortedMagnitudeView::new(v);
    let mut support = view.permutation[..k].to_vec();
    support.sort_unstable();
    Ok(support)
}

/// Hard thresholding onto the set of k-sparse vectors.
pub fn project_k_sparse(v: ArrayView1<'_, f64>, k: usize) -> Result<Array1<f64>> {
    let support = top_k_support(v, k)?;
    let mut out = Array1::zeros(v.len());
    for i in support {
        out[i] = v[i];
    }
    Ok(out)
}

pub fn prox_sparc(v: ArrayView1<'_, f64>, lambda: f64, k: usize) -> Result<Array1<f64>> {
    ensure_finite(v.iter().copied(), "input vector")?;
    check_param("lambda", lambda)?;
    let support = top_k_support(v, k)?;
    let restricted = Array1::from_iter(support.iter().map(|&i| v[i]));
    let shrunk = prox_oscar(restricted.view(), 0.0, lambda)?;
    let mut out = Array1::zeros(v.len());
    for (&i, z) in support.iter().zip(shrunk.iter()) {
        out[i] = *z;
    }
    Ok(out)
}

/// Value of the regularizer at `x`; `+inf` for SPARC when `||x||_0 > K`.
pub fn penalty_value(reg: &Regularizer, x: ArrayView1<'_, f64>) -> Result<f64> {
    ensure_finite(x.iter().copied(), "coefficient vector")?;
    reg.validate()?;
    let l1 = || x.iter().map(|v| v.abs()).sum::<f64>();
    match *reg {
        Regularizer::Lasso { lambda1 } => Ok(lambda1 * l1()),
        Regularizer::ElasticNet { lambda1, lambda2 } => {
            Ok(lambda1 * l1() + 0.5 * lambda2 * x.dot(&x))
        }
        Regularizer::Oscar { lambda1, lambda2 } => {
            if x.is_empty() {
                return Ok(0.0);
            }
            let view = SortedMagnitudeView::new(x);
            Ok(owl_weights(lambda1, lambda2, x.len())?.apply_sorted(&view.magnitudes))
        }
        Regularizer::Sparc { lambda, k } => {
            check_k(k, x.len())?;
            let nnz = x.iter().filter(|v| **v != 0.0).count();
            if nnz > k {
                return Ok(f64::INFINITY);
            }
            let view = SortedMagnitudeView::new(x);
            Ok(owl_weights(0.0, lambda, k)?.apply_sorted(&view.magnitudes[..k]))
        }
    }
}

/// Prox of `phi / alpha` evaluated at `v`.
pub fn prox_scaled(reg: &Regularizer, v: ArrayView1<'_, f64>, alpha: f64) -> Result<Array1<f64>> {
    reg.validate()?;
    match reg.scaled(alpha)? {
        Regularizer::Lasso { lambda1 } => soft_threshold(v, lambda1),
        Regularizer::ElasticNet { lambda1, lambda2 } => prox_elastic_net(v, lambda1, lambda2),
        Regularizer::Oscar { lambda1, lambda2 } => prox_oscar(v, lambda1, lambda2),
        Regularizer::Sparc { lambda, k } => prox_sparc(v, lambda, k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn close(a: &Array1<f64>, b: &Array1<f64>, tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert_abs_diff_eq!(*x, *y, epsilon = tol);
        }
    }

    #[test]
    fn soft_threshold_examples() {
        let v = array![3.0, -1.0, 0.5];
        close(&soft_threshold(v.view(), 1.0).unwrap(), &array![2.0, 0.0, 0.0], 0.0);
        close(&soft_threshold(v.view(), 0.0).unwrap(), &v, 0.0);
        close(
            &soft_threshold(array![-2.5].view(), 1.25).unwrap(),
            &array![-1.25],
            0.0,
        );
    }

    #[test]
    fn soft_threshold_rejects_non_finite() {
        assert!(soft_threshold(array![1.0, f64::NAN].view(), 1.0).is_err());
        assert!(soft_threshold(array![1.0].view(), -1.0).is_err());
    }

    #[test]
    fn elastic_net_trivial_cases() {
        let v = array![1.5, -2.0];
        close(&prox_elastic_net(v.view(), 0.0, 0.0).unwrap(), &v, 0.0);
        close(
            &prox_elastic_net(array![-4.0, 2.0].view(), 2.0, 0.0).unwrap(),
            &array![-2.0, 0.0],
            0.0,
        );
        assert!(prox_elastic_net(v.view(), -1.0, 0.0).is_err());
        assert!(prox_elastic_net(v.view(), 0.0, -1.0).is_err());
    }

    #[test]
    fn owl_weights_trivial_cases() {
        assert_eq!(owl_weights(0.0, 0.0, 4).unwrap().as_slice(), &[0.0; 4]);
        assert_eq!(owl_weights(2.0, 3.0, 3).unwrap().as_slice(), &[8.0, 5.0, 2.0]);
        assert!(owl_weights(1.0, 1.0, 0).is_err());
    }

    #[test]
    fn isotonic_trivial_cases() {
        let v = array![5.0, 4.0, 1.0];
        close(&isotonic_decreasing(v.view()).unwrap(), &v, 0.0);
        assert!(isotonic_decreasing(array![f64::INFINITY].view()).is_err());
        assert_eq!(isotonic_decreasing(Array1::zeros(0).view()).unwrap().len(), 0);
    }

    #[test]
    fn sorted_view_round_trips() {
        let v = array![0.5, -3.0, 0.0, 3.0, -1.0];
        let view = SortedMagnitudeView::new(v.view());
        assert_eq!(view.magnitudes, vec![3.0, 3.0, 1.0, 0.5, 0.0]);
        // equal magnitudes keep index order
        assert_eq!(view.permutation, vec![1, 3, 4, 0, 2]);
        assert_eq!(view.restore(&view.magnitudes), v);
    }

    #[test]
    fn top_k_examples() {
        assert_eq!(top_k_support(array![5.0, 1.0, -3.0].view(), 2).unwrap(), vec![0, 2]);
        assert_eq!(top_k_support(array![2.0, 2.0, 0.0].view(), 1).unwrap(), vec![0]);
        assert_eq!(top_k_support(array![0.1, -7.0, 2.0].view(), 3).unwrap(), vec![0, 1, 2]);
        assert!(top_k_support(array![1.0, 2.0].view(), 3).is_err());
        assert!(top_k_support(array![1.0, 2.0].view(), 0).is_err());
    }

    #[test]
    fn project_k_sparse_examples() {
        close(
            &project_k_sparse(array![5.0, 1.0, -3.0].view(), 2).unwrap(),
            &array![5.0, 0.0, -3.0],
            0.0,
        );
        let v = array![0.3, -0.2, 9.0];
        close(&project_k_sparse(v.view(), 3).unwrap(), &v, 0.0);
        close(
            &project_k_sparse(Array1::zeros(3).view(), 1).unwrap(),
            &Array1::zeros(3),
            0.0,
        );
    }

    #[test]
    fn sparc_with_zero_lambda_is_hard_thresholding() {
        let v = array![0.4, -2.0, 1.1, 1.1];
        assert_eq!(
            prox_sparc(v.view(), 0.0, 2).unwrap(),
            project_k_sparse(v.view(), 2).unwrap()
        );
    }

    #[test]
    fn zero_input_gives_zero_output() {
        let zero = Array1::<f64>::zeros(4);
        let regs = [
            Regularizer::Lasso { lambda1: 1.0 },
            Regularizer::ElasticNet { lambda1: 1.0, lambda2: 2.0 },
            Regularizer::Oscar { lambda1: 0.5, lambda2: 0.5 },
            Regularizer::Sparc { lambda: 1.0, k: 2 },
        ];
        for reg in regs {
            assert_eq!(reg.prox(zero.view()).unwrap(), zero);
            assert_eq!(reg.penalty(zero.view()).unwrap(), 0.0);
        }
    }

    #[test]
    fn sparc_penalty_examples() {
        let reg = Regularizer::Sparc { lambda: 1.0, k: 2 };
        assert_eq!(reg.penalty(array![4.0, 0.0, -3.0].view()).unwrap(), 4.0);
        let one = Regularizer::Sparc { lambda: 7.5, k: 1 };
        assert_eq!(one.penalty(array![0.0, -2.0, 0.0].view()).unwrap(), 0.0);
        let strict = Regularizer::Sparc { lambda: 1.0, k: 1 };
        assert_eq!(
            strict.penalty(array![1.0, 1.0, 0.0].view()).unwrap(),
            f64::INFINITY
        );
        // a tiny but nonzero entry still counts towards ||x||_0
        assert_eq!(
            strict.penalty(array![1.0, 1e-300, 0.0].view()).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn prox_scaled_divides_parameters() {
        let v = array![5.0, 1.0, -3.0];
        let sparc = Regularizer::Sparc { lambda: 2.0, k: 2 };
        close(
            &prox_scaled(&sparc, v.view(), 2.0).unwrap(),
            &prox_sparc(v.view(), 1.0, 2).unwrap(),
            0.0,
        );
        let lasso = Regularizer::Lasso { lambda1: 3.0 };
        close(
            &prox_scaled(&lasso, v.view(), 3.0).unwrap(),
            &soft_threshold(v.view(), 1.0).unwrap(),
            0.0,
        );
        assert!(prox_scaled(&lasso, v.view(), 0.0).is_err());
        assert!(prox_scaled(&lasso, v.view(), -1.0).is_err());
    }

    #[test]
    fn prox_scaled_large_alpha_approaches_identity() {
        let v = array![0.7, -1.3, 2.2];
        for reg in [
            Regularizer::Lasso { lambda1: 1.0 },
            Regularizer::ElasticNet { lambda1: 1.0, lambda2: 1.0 },
            Regularizer::Oscar { lambda1: 1.0, lambda2: 1.0 },
        ] {
            close(&prox_scaled(&reg, v.view(), 1e9).unwrap(), &v, 1e-8);
        }
    }

    #[test]
    fn regularizer_validation() {
        assert!(Regularizer::Lasso { lambda1: -0.1 }.validate().is_err());
        assert!(Regularizer::Oscar { lambda1: 0.0, lambda2: f64::NAN }.validate().is_err());
        assert!(Regularizer::Sparc { lambda: 1.0, k: 0 }.validate().is_err());
        let reg = Regularizer::Sparc { lambda: 1.0, k: 4 };
        assert!(reg.validate_for_dim(4).is_ok());
        assert!(reg.validate_for_dim(3).is_err());
        assert!(reg.penalty(array![1.0, 2.0].view()).is_err());
    }

    #[test]
    fn method_keys_parse_back() {
        for m in Method::ALL {
            assert_eq!(Method::parse(m.key()), Some(m));
        }
        assert_eq!(Method::parse("ridge"), None);
    }
}
