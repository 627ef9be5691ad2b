use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::tridiag::TridiagonalSystem;

use super::ForwardModel;

/// Coefficient-to-state map `c -> u(c)` for `-u'' + c u = f` on `(0, 1)` with
/// `u(0) = g0`, `u(1) = g1`, discretized by the three-point stencil on `N`
/// equal subintervals.
///
/// `c` lives on all `N + 1` nodes, `u` on the `N - 1` interior nodes. The
/// admissible set is `c >= 0` pointwise; [`ForwardModel::project`] clips to it.
#[derive(Debug, Clone)]
pub struct EllipticModel {
    subintervals: usize,
    g0: f64,
    g1: f64,
    source: GridFunction,
    c_grid: Grid,
    u_grid: Grid,
}

/// Builds the model; `f` must live on the interior grid of `N` subintervals.
pub fn elliptic_model(subintervals: usize, g0: f64, g1: f64, f: GridFunction) -> Result<EllipticModel> {
    if subintervals < 4 {
        return Err(Error::InvalidArgument(format!(
            "elliptic model needs N >= 4 subintervals, got {subintervals}"
        )));
    }
    let c_grid = Grid::nodal(subintervals + 1)?;
    let u_grid = Grid::interior(subintervals)?;
    u_grid.ensure_same(f.grid())?;
    if !(g0.is_finite() && g1.is_finite()) {
        return Err(Error::InvalidArgument("boundary data must be finite".into()));
    }
    Ok(EllipticModel { subintervals, g0, g1, source: f, c_grid, u_grid })
}

impl EllipticModel {
    /// Model with the source sampled from `f` at the interior nodes.
    pub fn with_source_fn(
        subintervals: usize,
        g0: f64,
        g1: f64,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let u_grid = Grid::interior(subintervals)?;
        elliptic_model(subintervals, g0, g1, GridFunction::from_fn(u_grid, f))
    }

    pub fn subintervals(&self) -> usize {
        self.subintervals
    }

    /// `A(c) = -D² + diag(c)` on interior nodes, homogeneous Dirichlet data.
    pub fn operator(&self, c: &GridFunction) -> Result<TridiagonalSystem> {
        self.check(c)?;
        let m = self.u_grid.len();
        let h = self.c_grid.spacing();
        let inv = 1.0 / (h * h);
        let diag = (0..m).map(|i| 2.0 * inv + c.values()[i + 1]).collect();
        TridiagonalSystem::new(vec![-inv; m - 1], diag, vec![-inv; m - 1])
    }

    fn check(&self, c: &GridFunction) -> Result<()> {
        self.c_grid.ensure_same(c.grid())?;
        if let Some(i) = c.values().iter().position(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::Inadmissible(format!(
                "c[{i}] = {} violates c >= 0",
                c.values()[i]
            )));
        }
        Ok(())
    }

    fn solve_homogeneous(&self, a: &TridiagonalSystem, rhs: Vec<f64>) -> Result<GridFunction> {
        GridFunction::new(self.u_grid, a.solve(&rhs)?)
    }
}

impl ForwardModel for EllipticModel {
    fn name(&self) -> &'static str {
        "elliptic"
    }

    fn x_grid(&self) -> Grid {
        self.c_grid
    }

    fn y_grid(&self) -> Grid {
        self.u_grid
    }

    fn is_linear(&self) -> bool {
        false
    }

    fn apply(&self, c: &GridFunction) -> Result<GridFunction> {
        let a = self.operator(c)?;
        let h = self.c_grid.spacing();
        let mut rhs = self.source.values().to_vec();
        let m = rhs.len();
        rhs[0] += self.g0 / (h * h);
        rhs[m - 1] += self.g1 / (h * h);
        self.solve_homogeneous(&a, rhs)
    }

    /// `-A(c)^{-1} (h u(c))`.
    fn derivative(&self, c: &GridFunction, dir: &GridFunction) -> Result<GridFunction> {
        self.c_grid.ensure_same(dir.grid())?;
        let u = self.apply(c)?;
        let a = self.operator(c)?;
        let rhs = u.values().iter().enumerate().map(|(i, ui)| -dir.values()[i + 1] * ui).collect();
        self.solve_homogeneous(&a, rhs)
    }

    /// `-u(c) A(c)^{-1} w`, zero at the two boundary nodes.
    fn adjoint_derivative(&self, c: &GridFunction, w: &GridFunction) -> Result<GridFunction> {
        self.u_grid.ensure_same(w.grid())?;
        let u = self.apply(c)?;
        let a = self.operator(c)?;
        let z = a.solve(w.values())?;
        let mut out = vec![0.0; self.c_grid.len()];
        for (i, (ui, zi)) in u.values().iter().zip(&z).enumerate() {
            out[i + 1] = -ui * zi;
        }
        GridFunction::new(self.c_grid, out)
    }

    fn domain_check(&self, c: &GridFunction) -> bool {
        self.check(c).is_ok()
    }

    fn project(&self, c: GridFunction) -> GridFunction {
        c.map(|v| v.max(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficient_zero_source_is_linear() {
        let m = EllipticModel::with_source_fn(400, 1.0, 6.0, |_| 0.0).unwrap();
        let u = m.apply(&GridFunction::zeros(m.x_grid())).unwrap();
        for (t, v) in m.y_grid().nodes().iter().zip(u.values()) {
            assert!((v - (1.0 + 5.0 * t)).abs() < 1e-10);
        }
    }

    #[test]
    fn negative_coefficient_is_inadmissible() {
        let m = EllipticModel::with_source_fn(10, 1.0, 6.0, |_| 1.0).unwrap();
        let mut c = GridFunction::constant(m.x_grid(), 1.0);
        c.values_mut()[3] = -0.1;
        assert!(!m.domain_check(&c));
        assert!(matches!(m.apply(&c), Err(Error::Inadmissible(_))));
        let p = m.project(c);
        assert!(m.domain_check(&p));
        assert_eq!(p.values()[3], 0.0);
    }

    #[test]
    fn rejects_tiny_grids_and_wrong_source_grid() {
        assert!(EllipticModel::with_source_fn(3, 0.0, 0.0, |_| 0.0).is_err());
        let f = GridFunction::zeros(Grid::nodal(11).unwrap());
        assert!(elliptic_model(10, 0.0, 0.0, f).is_err());
    }
}
