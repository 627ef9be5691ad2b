#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regupath_core::models::fredholm_kernel;
use regupath_core::{Grid, GridFunction};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform samples in `[lo, hi)`.
pub fn random_fn(grid: Grid, rng: &mut impl Rng, lo: f64, hi: f64) -> GridFunction {
    let v = (0..grid.len()).map(|_| rng.random_range(lo..hi)).collect();
    GridFunction::new(grid, v).unwrap()
}

/// A random combination of a few low-frequency sines plus an offset.
pub fn smooth_random_fn(grid: Grid, rng: &mut impl Rng) -> GridFunction {
    let c: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
    let offset = rng.random_range(-0.5..0.5);
    GridFunction::from_fn(grid, |t| {
        offset + c.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * std::f64::consts::PI * t).sin()).sum::<f64>()
    })
}

/// Trapezoid weights on `n` nodes of `[0, 1]`, built without the library.
pub fn trapezoid_weights(n: usize) -> Vec<f64> {
    let h = 1.0 / (n - 1) as f64;
    (0..n).map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h }).collect()
}

/// Dense Fredholm matrix `K_ij = w_j k(s_i, t_j)` on `n` nodes.
pub fn dense_kernel(n: usize) -> DMatrix<f64> {
    let w = trapezoid_weights(n);
    let t = |i: usize| i as f64 / (n - 1) as f64;
    DMatrix::from_fn(n, n, |i, j| w[j] * fredholm_kernel(t(i), t(j)))
}

/// Minimizer of `sum_i w_i ((Kx)_i - y_i)² + alpha sum_i w_i x_i²` from the
/// normal equations `(K^T W K + alpha W) x = K^T W y`.
pub fn normal_equations(y: &[f64], alpha: f64) -> Vec<f64> {
    let n = y.len();
    let k = dense_kernel(n);
    let w = DMatrix::from_diagonal(&DVector::from_vec(trapezoid_weights(n)));
    let lhs = k.transpose() * &w * &k + &w * alpha;
    let rhs = k.transpose() * &w * DVector::from_column_slice(y);
    lhs.lu().solve(&rhs).expect("normal equations are regular").as_slice().to_vec()
}

/// `sqrt(sum w_i (a_i - b_i)²) / sqrt(sum w_i b_i²)`.
pub fn rel_l2(a: &[f64], b: &[f64], w: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).zip(w).map(|((x, y), w)| w * (x - y).powi(2)).sum();
    let den: f64 = b.iter().zip(w).map(|(y, w)| w * y * y).sum();
    (num / den).sqrt()
}
