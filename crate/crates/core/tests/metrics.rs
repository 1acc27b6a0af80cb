mod common;

use common::*;
use ndarray::{array, Array1};
use sparc::metrics::*;

#[test]
fn mae_and_mse_match_direct_sums() {
    let mut r = rng(31);
    for _ in 0..20 {
        let a = uniform_mat(&mut r, 7, 4);
        let truth = uniform_vec(&mut r, 4, 2.0);
        let e = uniform_vec(&mut r, 4, 2.0);
        let (mut abs, mut sq) = (0.0, 0.0);
        for i in 0..7 {
            let mut d = 0.0;
            for j in 0..4 {
                d += a[[i, j]] * (truth[j] - e[j]);
            }
            abs += d.abs();
            sq += d * d;
        }
        assert!((mae(a.view(), Some(truth.view()), e.view()).unwrap() - abs).abs() < 1e-12);
        assert!((mse(a.view(), Some(truth.view()), e.view()).unwrap() - sq).abs() < 1e-12);
    }
}

#[test]
fn ser_examples() {
    assert_eq!(ser(Some(array![3.0, 0.0].view()), array![2.0, 1.0].view()).unwrap(), 100.0);
    assert_eq!(ser(Some(array![1.0, -2.0].view()), array![-1.0, 2.0].view()).unwrap(), 0.0);
    assert!(ser(None, array![1.0].view()).is_err());
}

/// Transitive closure of "within tol * (1 + larger)" over all pairs.
fn dof_oracle(e: &[f64], tol: f64, nnz_tol: f64) -> usize {
    let m: Vec<f64> = e.iter().map(|v| v.abs()).filter(|v| *v > nnz_tol).collect();
    let mut class: Vec<usize> = (0..m.len()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..m.len() {
            for j in 0..m.len() {
                if (m[i] - m[j]).abs() <= tol * (1.0 + m[i].max(m[j])) && class[i] != class[j] {
                    let c = class[i].min(class[j]);
                    class[i] = c;
                    class[j] = c;
                    changed = true;
                }
            }
        }
    }
    class.sort_unstable();
    class.dedup();
    class.len()
}

#[test]
fn dof_matches_pairwise_clustering() {
    let e = [1.00004, 1.0, 5.0];
    assert_eq!(dof(Array1::from(e.to_vec()).view(), 1e-4, 1e-8), 2);
    assert_eq!(dof_oracle(&e, 1e-4, 1e-8), 2);
    let mut r = rng(37);
    for _ in 0..200 {
        let e: Vec<f64> = uniform_vec(&mut r, 12, 1.0).iter().map(|v| (v * 20.0).round() / 20.0).collect();
        assert_eq!(dof(Array1::from(e.clone()).view(), 1e-4, 1e-8), dof_oracle(&e, 1e-4, 1e-8));
    }
}

#[test]
fn cla_matches_direct_count() {
    let mut r = rng(41);
    for _ in 0..20 {
        let a = uniform_mat(&mut r, 25, 3);
        let e = uniform_vec(&mut r, 3, 1.0);
        let y = uniform_vec(&mut r, 25, 1.0).mapv(|v| if v >= 0.0 { 1.0 } else { -1.0 });
        let mut correct = 0;
        for i in 0..25 {
            let s: f64 = (0..3).map(|j| a[[i, j]] * e[j]).sum();
            let pred = if s >= 0.0 { 1.0 } else { -1.0 };
            if pred == y[i] {
                correct += 1;
            }
        }
        let got = cla(a.view(), y.view(), e.view()).unwrap();
        assert!((got - 100.0 * correct as f64 / 25.0).abs() < 1e-12);
    }
    // e = 0 predicts +1 everywhere
    let a = array![[1.0], [2.0], [3.0], [4.0]];
    let y = array![1.0, -1.0, 1.0, 1.0];
    assert_eq!(cla(a.view(), y.view(), array![0.0].view()).unwrap(), 75.0);
}

#[test]
fn nnz_of_sparc_output_respects_k() {
    let z = sparc::prox::prox_sparc(array![4.0, -1.0, 2.0, 0.5, 3.0].view(), 0.2, 3).unwrap();
    assert!(nnz(z.view(), DEFAULT_NNZ_TOLERANCE) <= 3);
    assert_eq!(nnz(array![0.0, 1e-12, 2.0].view(), DEFAULT_NNZ_TOLERANCE), 1);
}
