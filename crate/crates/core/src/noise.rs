//! Deterministic noise generators and the empirical noise-regularity constant.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{l2_norm, lr_norm, Grid, GridFunction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseKind {
    /// i.i.d. normal samples rescaled to L² norm `level`.
    Gaussian { level: f64 },
    /// `ceil(fraction * n)` samples shifted by `±amplitude`.
    Impulsive { fraction: f64, amplitude: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    #[serde(flatten)]
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn gaussian(level: f64, seed: u64) -> Self {
        Self { kind: NoiseKind::Gaussian { level }, seed }
    }

    pub fn impulsive(fraction: f64, amplitude: f64, seed: u64) -> Self {
        Self { kind: NoiseKind::Impulsive { fraction, amplitude }, seed }
    }

    pub fn validate(&self, n: usize) -> Vec<String> {
        let mut errs = Vec::new();
        match self.kind {
            NoiseKind::Gaussian { level } => {
                if !(level > 0.0 && level.is_finite()) {
                    errs.push(format!("gaussian noise level must be positive, got {level}"));
                }
            }
            NoiseKind::Impulsive { fraction, amplitude } => {
                if !(fraction > 0.0 && fraction < 1.0) {
                    errs.push(format!("impulsive fraction must lie in (0, 1), got {fraction}"));
                } else if impulse_count(fraction, n) == 0 {
                    errs.push("impulsive noise perturbs no samples".into());
                }
                if !(amplitude > 0.0 && amplitude.is_finite()) {
                    errs.push(format!("impulsive amplitude must be positive, got {amplitude}"));
                }
            }
        }
        errs
    }
}

/// `ceil(fraction * n)`, robust to representation error in the product.
pub fn impulse_count(fraction: f64, n: usize) -> usize {
    let x = fraction * n as f64;
    let c = x.ceil();
    if c - x > 1.0 - 1e-9 {
        (c - 1.0) as usize
    } else {
        c as usize
    }
}

/// The perturbation `y_noisy - y` for `spec` on `grid`.
pub fn noise_vector(grid: Grid, spec: &NoiseSpec) -> Result<GridFunction> {
    let errs = spec.validate(grid.len());
    if !errs.is_empty() {
        return Err(Error::InvalidArgument(errs.join("; ")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = grid.len();
    match spec.kind {
        NoiseKind::Gaussian { level } => {
            let raw: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let raw = GridFunction::new(grid, raw)?;
            Ok(raw.scale(level / l2_norm(&raw)))
        }
        NoiseKind::Impulsive { fraction, amplitude } => {
            let mut values = vec![0.0; n];
            let idx = sample(&mut rng, n, impulse_count(fraction, n));
            for i in idx.iter() {
                values[i] = if rng.random_bool(0.5) { amplitude } else { -amplitude };
            }
            GridFunction::new(grid, values)
        }
    }
}

/// Perturbs `y` and returns the noisy data with the realized noise level
/// `||y_noisy - y||_r` in the data norm.
pub fn make_noisy(y: &GridFunction, spec: &NoiseSpec, r: f64) -> Result<(GridFunction, f64)> {
    let e = noise_vector(*y.grid(), spec)?;
    let noisy = y.add(&e)?;
    let delta = lr_norm(&noisy.sub(y)?, r)?;
    Ok((noisy, delta))
}

/// Gaussian direction with unit L^r norm, used for fixed-direction noise
/// sequences `y + delta e`.
pub fn unit_direction(grid: Grid, seed: u64, r: f64) -> Result<GridFunction> {
    let e = noise_vector(grid, &NoiseSpec::gaussian(1.0, seed))?;
    Ok(e.scale(1.0 / lr_norm(&e, r)?))
}

/// Empirical lower estimate of `kappa` in `||noise - v|| >= kappa ||noise||`:
/// the minimum ratio over `candidates` and `v = 0`, capped at 1.
pub fn estimate_kappa(noise: &GridFunction, candidates: &[GridFunction], r: f64) -> Result<f64> {
    let base = lr_norm(noise, r)?;
    if base == 0.0 {
        return Err(Error::Degenerate("zero noise leaves kappa undefined".into()));
    }
    let mut kappa = 1.0f64;
    for v in candidates {
        kappa = kappa.min(lr_norm(&noise.sub(v)?, r)? / base);
    }
    Ok(kappa)
}
