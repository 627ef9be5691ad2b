use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};

use super::ForwardModel;

/// `k(s, t) = 40 s (1 - t)` for `s <= t`, `40 t (1 - s)` otherwise.
///
/// This is 40 times the Green's function of `-d²/dt²` on `[0, 1]` with
/// homogeneous Dirichlet conditions, hence symmetric.
pub fn fredholm_kernel(s: f64, t: f64) -> f64 {
    if s <= t {
        40.0 * s * (1.0 - t)
    } else {
        40.0 * t * (1.0 - s)
    }
}

/// Trapezoid discretization of `(Kx)(s) = int_0^1 k(s, t) x(t) dt` on a
/// nodal grid, applied in `O(n)` through the kernel's separable structure.
#[derive(Debug, Clone)]
pub struct FredholmModel {
    grid: Grid,
}

pub fn fredholm_model(n: usize) -> Result<FredholmModel> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("Fredholm grid needs n >= 3, got {n}")));
    }
    Ok(FredholmModel { grid: Grid::nodal(n)? })
}

impl FredholmModel {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// Dense matrix `K[i][j] = w_j k(s_i, t_j)` of the discretized operator.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let t = self.grid.nodes();
        let w = self.grid.weights();
        t.iter()
            .map(|&s| t.iter().zip(&w).map(|(&tj, &wj)| wj * fredholm_kernel(s, tj)).collect())
            .collect()
    }

    fn integrate(&self, x: &GridFunction) -> Result<GridFunction> {
        self.grid.ensure_same(x.grid())?;
        let n = self.grid.len();
        let t = self.grid.nodes();
        let v = x.values();
        // below[i] = sum_{j<i} w_j t_j x_j, above[i] = sum_{j>=i} w_j (1 - t_j) x_j
        let mut below = vec![0.0; n + 1];
        for j in 0..n {
            below[j + 1] = below[j] + self.grid.weight(j) * t[j] * v[j];
        }
        let mut above = vec![0.0; n + 1];
        for j in (0..n).rev() {
            above[j] = above[j + 1] + self.grid.weight(j) * (1.0 - t[j]) * v[j];
        }
        let out = (0..n).map(|i| 40.0 * ((1.0 - t[i]) * below[i] + t[i] * above[i])).collect();
        GridFunction::new(self.grid, out)
    }
}

impl ForwardModel for FredholmModel {
    fn name(&self) -> &'static str {
        "fredholm"
    }

    fn x_grid(&self) -> Grid {
        self.grid
    }

    fn y_grid(&self) -> Grid {
        self.grid
    }

    fn is_linear(&self) -> bool {
        true
    }

    fn apply(&self, x: &GridFunction) -> Result<GridFunction> {
        self.integrate(x)
    }

    fn derivative(&self, _x: &GridFunction, h: &GridFunction) -> Result<GridFunction> {
        self.integrate(h)
    }

    // With w_i k(s_i, t_j) = w_j k(s_j, t_i) weighted transposition is the
    // operator itself.
    fn adjoint_derivative(&self, _x: &GridFunction, w: &GridFunction) -> Result<GridFunction> {
        self.integrate(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::l2_inner;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_maps_to_zero() {
        let m = fredholm_model(41).unwrap();
        let y = m.apply(&GridFunction::zeros(m.grid())).unwrap();
        assert!(y.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fast_apply_matches_dense_matrix() {
        let m = fredholm_model(101).unwrap();
        let k = m.matrix();
        let x = GridFunction::from_fn(m.grid(), |t| (5.0 * t).cos() + t);
        let fast = m.apply(&x).unwrap();
        for (i, row) in k.iter().enumerate() {
            let dense: f64 = row.iter().zip(x.values()).map(|(a, b)| a * b).sum();
            assert!((dense - fast.values()[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_matrix_is_symmetric() {
        let m = fredholm_model(61).unwrap();
        let k = m.matrix();
        let w = m.grid().weights();
        for i in 0..61 {
            for j in 0..61 {
                assert!((w[i] * k[i][j] - w[j] * k[j][i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn self_adjoint_on_random_pairs() {
        let m = fredholm_model(401).unwrap();
        let g = m.grid();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x = GridFunction::new(g, (0..401).map(|_| rng.random_range(-1.0..1.0)).collect())
                .unwrap();
            let z = GridFunction::new(g, (0..401).map(|_| rng.random_range(-1.0..1.0)).collect())
                .unwrap();
            let lhs = l2_inner(&m.apply(&x).unwrap(), &z).unwrap();
            let rhs = l2_inner(&x, &m.apply(&z).unwrap()).unwrap();
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn second_difference_recovers_forty_x() {
        let m = fredholm_model(201).unwrap();
        let x = GridFunction::from_fn(m.grid(), |t| 4.0 * t * (1.0 - t) + (2.0 * std::f64::consts::PI * t).sin());
        let y = m.apply(&x).unwrap();
        let h = m.grid().spacing();
        let v = y.values();
        assert!(v[0].abs() < 1e-14 && v[200].abs() < 1e-14);
        for i in 1..200 {
            let lap = -(v[i - 1] - 2.0 * v[i] + v[i + 1]) / (h * h);
            assert!((lap - 40.0 * x.values()[i]).abs() < 1e-6 * (1.0 + lap.abs()), "i={i}");
        }
    }

    #[test]
    fn sine_is_an_eigenfunction_in_the_limit() {
        let m = fredholm_model(2001).unwrap();
        let pi = std::f64::consts::PI;
        let x = GridFunction::from_fn(m.grid(), |t| (pi * t).sin());
        let y = m.apply(&x).unwrap();
        let lambda = 40.0 / (pi * pi);
        for (t, v) in m.grid().nodes().iter().zip(y.values()) {
            assert!((v - lambda * (pi * t).sin()).abs() < 1e-5);
        }
    }
}
