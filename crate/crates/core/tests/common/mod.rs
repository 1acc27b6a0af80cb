//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's prox or penalty code.
#![allow(dead_code)]

use ndarray::{Array1, Array2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use sparc::Regularizer;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, p: usize, scale: f64) -> Array1<f64> {
    Array1::from_shape_fn(p, |_| rng.gen_range(-scale..scale))
}

pub fn uniform_mat(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Array2<f64> {
    Array2::from_shape_fn((n, p), |_| rng.gen_range(-1.0..1.0))
}

/// `sum_{i<j} max(|x_i|, |x_j|)` by the double loop.
pub fn pairwise_max(x: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            total += x[i].abs().max(x[j].abs());
        }
    }
    total
}

/// The K largest magnitudes, zero padded to length K.
pub fn top_k_magnitudes(x: &[f64], k: usize) -> Vec<f64> {
    let mut m: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    m.sort_by(|a, b| b.partial_cmp(a).unwrap());
    m.resize(k.max(m.len()), 0.0);
    m.truncate(k);
    m
}

/// Penalty straight from the definitions.
pub fn penalty_oracle(reg: &Regularizer, x: &[f64]) -> f64 {
    let l1: f64 = x.iter().map(|v| v.abs()).sum();
    let sq: f64 = x.iter().map(|v| v * v).sum();
    match *reg {
        Regularizer::Lasso { lambda1 } => lambda1 * l1,
        Regularizer::ElasticNet { lambda1, lambda2 } => lambda1 * l1 + 0.5 * lambda2 * sq,
        Regularizer::Oscar { lambda1, lambda2 } => lambda1 * l1 + lambda2 * pairwise_max(x),
        Regularizer::Sparc { lambda, k } => {
            if x.iter().filter(|v| **v != 0.0).count() > k {
                f64::INFINITY
            } else {
                lambda * pairwise_max(&top_k_magnitudes(x, k))
            }
        }
    }
}

/// `phi(z) + 0.5 ||z - v||^2` with the oracle penalty.
pub fn prox_objective(reg: &Regularizer, v: &[f64], z: &[f64]) -> f64 {
    let d: f64 = z.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
    penalty_oracle(reg, z) + 0.5 * d
}

fn combinations(p: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, p: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..p {
            cur.push(i);
            rec(i + 1, p, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, p, k, &mut Vec::new(), &mut out);
    out
}

/// Minimizes `f` over the coordinates in `free` (others fixed at zero):
/// a uniform grid over `[-radius, radius]` at step `max(0.01, ...)` chosen
/// so the grid has at most `budget` points, then a compass/diagonal pattern
/// search that halves its step down to `final_step`.
fn grid_then_refine(
    p: usize,
    free: &[usize],
    radius: f64,
    budget: usize,
    final_step: f64,
    f: &dyn Fn(&[f64]) -> f64,
) -> (Vec<f64>, f64) {
    let d = free.len();
    let mut z = vec![0.0; p];
    if d == 0 {
        return (z.clone(), f(&z));
    }
    let per_axis = (budget as f64).powf(1.0 / d as f64).floor().max(2.0) as usize;
    let step = (2.0 * radius / (per_axis - 1) as f64).max(0.01);
    let n_axis = (2.0 * radius / step).floor() as usize + 1;

    let mut best = vec![0.0; p];
    let mut best_f = f(&best);
    let mut idx = vec![0usize; d];
    loop {
        for (c, &j) in free.iter().enumerate() {
            z[j] = -radius + idx[c] as f64 * step;
        }
        let fz = f(&z);
        if fz < best_f {
            best_f = fz;
            best.copy_from_slice(&z);
        }
        let mut c = 0;
        while c < d {
            idx[c] += 1;
            if idx[c] < n_axis {
                break;
            }
            idx[c] = 0;
            c += 1;
        }
        if c == d {
            break;
        }
    }

    // all nonzero directions in {-1, 0, 1}^d
    let dirs: Vec<Vec<i32>> = (0..3usize.pow(d as u32))
        .map(|mut code| {
            (0..d)
                .map(|_| {
                    let t = (code % 3) as i32 - 1;
                    code /= 3;
                    t
                })
                .collect()
        })
        .filter(|dir: &Vec<i32>| dir.iter().any(|t| *t != 0))
        .collect();
    let mut h = step;
    while h >= final_step {
        let mut improved = true;
        while improved {
            improved = false;
            for dir in &dirs {
                let mut cand = best.clone();
                for (c, &j) in free.iter().enumerate() {
                    cand[j] += h * dir[c] as f64;
                }
                let fc = f(&cand);
                if fc < best_f - 1e-15 {
                    best_f = fc;
                    best = cand;
                    improved = true;
                }
            }
        }
        h /= 2.0;
    }
    (best, best_f)
}

/// Brute-force prox: the lowest prox objective found by grid search plus
/// refinement. For SPARC every support of size `min(K, p)` is searched
/// separately so the K-sparse constraint holds by construction.
pub fn brute_force_prox(reg: &Regularizer, v: &[f64], budget: usize) -> (Vec<f64>, f64) {
    let p = v.len();
    let radius = 2.0 * v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-3);
    let f = |z: &[f64]| prox_objective(reg, v, z);
    match *reg {
        Regularizer::Sparc { k, .. } => combinations(p, k.min(p))
            .iter()
            .map(|support| grid_then_refine(p, support, radius, budget, 1e-5, &f))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap(),
        _ => {
            let all: Vec<usize> = (0..p).collect();
            grid_then_refine(p, &all, radius, budget, 1e-5, &f)
        }
    }
}

/// Exact non-increasing isotonic regression by enumerating every partition
/// into contiguous blocks and keeping the best feasible block-mean fit.
pub fn isotonic_by_enumeration(u: &[f64]) -> Vec<f64> {
    let n = u.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u32..(1 << (n - 1)) {
        let mut fit = vec![0.0; n];
        let mut start = 0;
        for end in 1..=n {
            if end == n || mask & (1 << (end - 1)) != 0 {
                let mean = u[start..end].iter().sum::<f64>() / (end - start) as f64;
                fit[start..end].iter_mut().for_each(|v| *v = mean);
                start = end;
            }
        }
        if fit.windows(2).any(|w| w[1] > w[0] + 1e-12) {
            continue;
        }
        let sse: f64 = fit.iter().zip(u).map(|(a, b)| (a - b) * (a - b)).sum();
        if best.as_ref().is_none_or(|(s, _)| sse < *s) {
            best = Some((sse, fit));
        }
    }
    best.unwrap().1
}

/// Cyclic coordinate descent for `0.5 ||Ax - y||^2 + lambda ||x||_1`.
pub fn lasso_coordinate_descent(a: &Array2<f64>, y: &Array1<f64>, lambda: f64, sweeps: usize) -> Array1<f64> {
    let p = a.ncols();
    let mut x = Array1::<f64>::zeros(p);
    let mut r = y.clone();
    let col_sq: Vec<f64> = (0..p).map(|j| a.column(j).dot(&a.column(j))).collect();
    for _ in 0..sweeps {
        for j in 0..p {
            if col_sq[j] == 0.0 {
                continue;
            }
            let aj = a.column(j);
            let rho = aj.dot(&r) + col_sq[j] * x[j];
            let new = rho.signum() * (rho.abs() - lambda).max(0.0) / col_sq[j];
            r.scaled_add(x[j] - new, &aj);
            x[j] = new;
        }
    }
    x
}

/// Least-squares objective plus oracle penalty.
pub fn full_objective(a: &Array2<f64>, y: &Array1<f64>, reg: &Regularizer, x: &Array1<f64>) -> f64 {
    let r = a.dot(x) - y;
    0.5 * r.dot(&r) + penalty_oracle(reg, x.as_slice().unwrap())
}

/// Solves the normal equations `A^T A x = A^T y` by Gaussian elimination
/// with partial pivoting.
pub fn normal_equations(a: &Array2<f64>, y: &Array1<f64>) -> Array1<f64> {
    let mut m = a.t().dot(a);
    let mut b = a.t().dot(y);
    let p = b.len();
    for col in 0..p {
        let piv = (col..p)
            .max_by(|&i, &j| m[[i, col]].abs().partial_cmp(&m[[j, col]].abs()).unwrap())
            .unwrap();
        for c in 0..p {
            m.swap([col, c], [piv, c]);
        }
        b.swap(col, piv);
        for row in col + 1..p {
            let factor = m[[row, col]] / m[[col, col]];
            for c in col..p {
                m[[row, c]] -= factor * m[[col, c]];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = Array1::<f64>::zeros(p);
    for row in (0..p).rev() {
        let s: f64 = (row + 1..p).map(|c| m[[row, c]] * x[c]).sum();
        x[row] = (b[row] - s) / m[[row, row]];
    }
    x
}

/// Random regularizer with parameters in `[0, scale)`; SPARC's K is in `1..=p`.
pub fn random_regularizer(rng: &mut ChaCha8Rng, kind: usize, p: usize, scale: f64) -> Regularizer {
    match kind % 4 {
        0 => Regularizer::Lasso {
            lambda1: rng.gen_range(0.0..scale),
        },
        1 => Regularizer::ElasticNet {
            lambda1: rng.gen_range(0.0..scale),
            lambda2: rng.gen_range(0.0..scale),
        },
        2 => Regularizer::Oscar {
            lambda1: rng.gen_range(0.0..scale),
            lambda2: rng.gen_range(0.0..scale),
        },
        _ => Regularizer::Sparc {
            lambda: rng.gen_range(0.0..scale),
            k: rng.gen_range(1..=p),
        },
    }
}
