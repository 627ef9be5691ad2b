//! Convex penalty functionals with subgradients and Bregman distances.
//!
//! Subgradients are returned as weighted-L² representers: `xi` such that the
//! directional derivative of the penalty at `x` along `d` is `<xi, d>` with the
//! quadrature-weighted inner product of the grid.

use crate::error::{Error, Result};
use crate::grid::{l2_inner, l2_inner_unchecked, GridFunction};

/// Bregman distances below this are treated as a broken subgradient.
pub const BREGMAN_NEGATIVE_SLACK: f64 = 1e-10;

/// A convex penalty `R`.
#[derive(Debug, Clone, PartialEq)]
pub enum Penalty {
    /// `||x||²`.
    Quadratic,
    /// `||x - reference||²`.
    ShiftedQuadratic { reference: GridFunction },
    /// `sum_i h sqrt((Dx)_i² + eps²) - eps (n-1) h + mu ||x||²` with forward
    /// differences `(Dx)_i = (x_{i+1} - x_i) / h`.
    SmoothedTv { epsilon: f64, mu: f64 },
}

impl Penalty {
    pub fn smoothed_tv(epsilon: f64, mu: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!("TV smoothing must be positive, got {epsilon}")));
        }
        if !(mu >= 0.0 && mu.is_finite()) {
            return Err(Error::InvalidArgument(format!("mu must be nonnegative, got {mu}")));
        }
        Ok(Penalty::SmoothedTv { epsilon, mu })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Penalty::Quadratic => "quadratic",
            Penalty::ShiftedQuadratic { .. } => "shifted_quadratic",
            Penalty::SmoothedTv { .. } => "smoothed_tv",
        }
    }

    pub fn value(&self, x: &GridFunction) -> Result<f64> {
        match self {
            Penalty::Quadratic => Ok(l2_inner_unchecked(x, x)),
            Penalty::ShiftedQuadratic { reference } => {
                let d = x.sub(reference)?;
                Ok(l2_inner_unchecked(&d, &d))
            }
            Penalty::SmoothedTv { epsilon, mu } => {
                let h = x.grid().spacing();
                let v = x.values();
                let tv: f64 = v
                    .windows(2)
                    .map(|w| {
                        let d = (w[1] - w[0]) / h;
                        h * ((d * d + epsilon * epsilon).sqrt() - epsilon)
                    })
                    .sum();
                Ok(tv + mu * l2_inner_unchecked(x, x))
            }
        }
    }

    /// The (unique, since every kind is differentiable) subgradient at `x`.
    pub fn subgradient(&self, x: &GridFunction) -> Result<GridFunction> {
        match self {
            Penalty::Quadratic => Ok(x.scale(2.0)),
            Penalty::ShiftedQuadratic { reference } => Ok(x.sub(reference)?.scale(2.0)),
            Penalty::SmoothedTv { epsilon, mu } => {
                let grid = *x.grid();
                let h = grid.spacing();
                let v = x.values();
                let n = v.len();
                // flux_i = (Dx)_i / sqrt((Dx)_i² + eps²), one per interval
                let flux: Vec<f64> = v
                    .windows(2)
                    .map(|w| {
                        let d = (w[1] - w[0]) / h;
                        d / (d * d + epsilon * epsilon).sqrt()
                    })
                    .collect();
                let mut g = x.scale(2.0 * mu);
                let out = g.values_mut();
                for j in 0..n {
                    let left = if j > 0 { flux[j - 1] } else { 0.0 };
                    let right = if j + 1 < n { flux[j] } else { 0.0 };
                    out[j] += (left - right) / grid.weight(j);
                }
                Ok(g)
            }
        }
    }

    /// `D_xi R(x_bar, x) = R(x_bar) - R(x) - <xi, x_bar - x>`.
    ///
    /// Fails when the result is more negative than [`BREGMAN_NEGATIVE_SLACK`],
    /// which means `xi` is not a subgradient at `x`.
    pub fn bregman_distance(
        &self,
        xi: &GridFunction,
        x_bar: &GridFunction,
        x: &GridFunction,
    ) -> Result<f64> {
        bregman_distance(self, xi, x_bar, x)
    }
}

pub fn penalty_value(p: &Penalty, x: &GridFunction) -> Result<f64> {
    p.value(x)
}

pub fn penalty_subgradient(p: &Penalty, x: &GridFunction) -> Result<GridFunction> {
    p.subgradient(x)
}

pub fn bregman_distance(
    p: &Penalty,
    xi: &GridFunction,
    x_bar: &GridFunction,
    x: &GridFunction,
) -> Result<f64> {
    let diff = x_bar.sub(x)?;
    let d = p.value(x_bar)? - p.value(x)? - l2_inner(xi, &diff)?;
    if d < -BREGMAN_NEGATIVE_SLACK {
        return Err(Error::SubgradientViolation(d));
    }
    Ok(d.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_fn(rng: &mut ChaCha8Rng, g: Grid, scale: f64) -> GridFunction {
        GridFunction::new(g, (0..g.len()).map(|_| rng.random_range(-scale..scale)).collect()).unwrap()
    }

    fn smooth_random(rng: &mut ChaCha8Rng, g: Grid) -> GridFunction {
        let c: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..6.0)).collect();
        GridFunction::from_fn(g, |t| {
            (0..4).map(|k| c[k] * ((k + 1) as f64 * 3.0 * t + p[k]).sin()).sum::<f64>()
        })
    }

    fn kinds(g: Grid) -> Vec<Penalty> {
        vec![
            Penalty::Quadratic,
            Penalty::ShiftedQuadratic { reference: GridFunction::from_fn(g, |t| t) },
            Penalty::smoothed_tv(1e-4, 0.0).unwrap(),
            Penalty::smoothed_tv(1e-2, 0.001).unwrap(),
        ]
    }

    #[test]
    fn quadratic_of_zero_is_zero() {
        let g = Grid::nodal(11).unwrap();
        assert_eq!(Penalty::Quadratic.value(&GridFunction::zeros(g)).unwrap(), 0.0);
    }

    #[test]
    fn shifted_vanishes_at_reference() {
        let g = Grid::nodal(11).unwrap();
        let c0 = GridFunction::from_fn(g, |t| t);
        let p = Penalty::ShiftedQuadratic { reference: c0.clone() };
        assert_eq!(p.value(&c0).unwrap(), 0.0);
        assert!(p.subgradient(&c0).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn tv_of_unit_step_is_one() {
        let g = Grid::nodal(2001).unwrap();
        let step = GridFunction::from_fn(g, |t| if t < 0.5 { 0.0 } else { 1.0 });
        let p = Penalty::smoothed_tv(1e-6, 0.0).unwrap();
        // discrete sum oracle: one jump of height 1, all other differences zero
        let h = g.spacing();
        let oracle = h * ((1.0 / h).powi(2) + 1e-12).sqrt() - 1e-6 * h;
        let v = p.value(&step).unwrap();
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - 1.0).abs() < 1e-4);
    }

    #[test]
    fn tv_of_constant_is_mu_norm() {
        let g = Grid::nodal(51).unwrap();
        let c = GridFunction::constant(g, 2.5);
        let p = Penalty::smoothed_tv(1e-4, 0.001).unwrap();
        assert!((p.value(&c).unwrap() - 0.001 * 6.25).abs() < 1e-15);
    }

    #[test]
    fn quadratic_bregman_is_squared_distance() {
        let g = Grid::nodal(41).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_fn(&mut rng, g, 2.0);
        let x_bar = random_fn(&mut rng, g, 2.0);
        let xi = Penalty::Quadratic.subgradient(&x).unwrap();
        let d = Penalty::Quadratic.bregman_distance(&xi, &x_bar, &x).unwrap();
        let diff = x_bar.sub(&x).unwrap();
        let expect = l2_inner(&diff, &diff).unwrap();
        assert!((d - expect).abs() <= 1e-12 * expect);
        assert_eq!(Penalty::Quadratic.bregman_distance(&xi, &x, &x).unwrap(), 0.0);
    }

    #[test]
    fn tv_bregman_matches_direct_formula() {
        let g = Grid::nodal(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = Penalty::smoothed_tv(1e-3, 0.01).unwrap();
        for _ in 0..20 {
            let x = smooth_random(&mut rng, g);
            let x_bar = smooth_random(&mut rng, g);
            let xi = p.subgradient(&x).unwrap();
            // independent re-evaluation: plain loops over the defining sums
            let (eps, mu) = (1e-3, 0.01);
            let h = g.spacing();
            let r = |f: &GridFunction| {
                let v = f.values();
                let mut s = 0.0;
                for i in 0..v.len() - 1 {
                    let d = (v[i + 1] - v[i]) / h;
                    s += h * ((d * d + eps * eps).sqrt() - eps);
                }
                for (i, vi) in v.iter().enumerate() {
                    s += mu * g.weight(i) * vi * vi;
                }
                s
            };
            let mut pair = 0.0;
            for i in 0..g.len() {
                pair += g.weight(i) * xi.values()[i] * (x_bar.values()[i] - x.values()[i]);
            }
            let oracle = r(&x_bar) - r(&x) - pair;
            let d = p.bregman_distance(&xi, &x_bar, &x).unwrap();
            assert!((d - oracle.max(0.0)).abs() <= 1e-10 * (1.0 + oracle.abs()));
            assert!(d >= 0.0);
        }
    }

    #[test]
    fn wrong_subgradient_is_flagged() {
        let g = Grid::nodal(21).unwrap();
        let x = GridFunction::constant(g, 1.0);
        let bogus = GridFunction::constant(g, 100.0);
        let x_bar = GridFunction::constant(g, 2.0);
        assert!(matches!(
            Penalty::Quadratic.bregman_distance(&bogus, &x_bar, &x),
            Err(Error::SubgradientViolation(_))
        ));
    }

    #[test]
    fn subgradient_inequality_and_convexity() {
        let g = Grid::nodal(31).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for p in kinds(g) {
            for _ in 0..1000 {
                let x = random_fn(&mut rng, g, 3.0);
                let x_bar = random_fn(&mut rng, g, 3.0);
                let xi = p.subgradient(&x).unwrap();
                let gap = p.value(&x_bar).unwrap()
                    - p.value(&x).unwrap()
                    - l2_inner(&xi, &x_bar.sub(&x).unwrap()).unwrap();
                assert!(gap >= -1e-10, "{}: gap {gap}", p.name());
                let mid = x.scale(0.5).axpy(0.5, &x_bar).unwrap();
                let lhs = p.value(&mid).unwrap();
                let rhs = 0.5 * p.value(&x).unwrap() + 0.5 * p.value(&x_bar).unwrap();
                assert!(lhs <= rhs + 1e-12 * (1.0 + rhs));
                assert!(p.value(&x).unwrap() >= 0.0);
                assert!(p.bregman_distance(&xi, &x, &x).unwrap().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn subgradients_match_central_differences() {
        let g = Grid::nodal(201).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let s = 1e-6;
        for p in kinds(g) {
            for _ in 0..20 {
                let x = smooth_random(&mut rng, g);
                let d = smooth_random(&mut rng, g);
                let d = d.scale(1.0 / crate::grid::l2_norm(&d));
                let fd = (p.value(&x.axpy(s, &d).unwrap()).unwrap()
                    - p.value(&x.axpy(-s, &d).unwrap()).unwrap())
                    / (2.0 * s);
                let an = l2_inner(&p.subgradient(&x).unwrap(), &d).unwrap();
                assert!(
                    (fd - an).abs() <= 1e-5 * an.abs().max(1e-3),
                    "{}: fd {fd} vs analytic {an}",
                    p.name()
                );
            }
        }
    }
}
