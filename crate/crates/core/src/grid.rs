//! Uniform one-dimensional grids, sampled functions and discrete L^r geometry.
//!
//! Every quantity in the toolkit (unknowns, data, states, coefficients) is a
//! [`GridFunction`]: a vector of samples tied to a [`Grid`] that fixes the
//! sample locations and the quadrature weights used by norms and inner
//! products. Functions only combine when their grids are identical.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sample-placement convention of a uniform grid on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    /// `n` nodes including both endpoints, `h = (b-a)/(n-1)`, trapezoid weights.
    Nodal,
    /// `n` interior nodes of `n + 1` equal subintervals, `h = (b-a)/(n+1)`,
    /// weight `h` each. Used for states with Dirichlet boundary data.
    Interior,
    /// `n` cell midpoints, `h = (b-a)/n`, weight `h` each.
    Cell,
}

/// A uniform grid on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    kind: GridKind,
    n: usize,
    a: f64,
    b: f64,
}

impl Grid {
    pub fn new(kind: GridKind, n: usize, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!("interval [{a}, {b}] is empty")));
        }
        let min = match kind {
            GridKind::Nodal => 2,
            GridKind::Interior | GridKind::Cell => 1,
        };
        if n < min {
            return Err(Error::InvalidArgument(format!(
                "{kind:?} grid needs at least {min} points, got {n}"
            )));
        }
        Ok(Self { kind, n, a, b })
    }

    /// Nodal grid with `n` points on `[0, 1]`.
    pub fn nodal(n: usize) -> Result<Self> {
        Self::new(GridKind::Nodal, n, 0.0, 1.0)
    }

    /// Interior nodes of `subintervals` equal cells on `[0, 1]`.
    pub fn interior(subintervals: usize) -> Result<Self> {
        if subintervals < 2 {
            return Err(Error::InvalidArgument("need at least 2 subintervals".into()));
        }
        Self::new(GridKind::Interior, subintervals - 1, 0.0, 1.0)
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn spacing(&self) -> f64 {
        let l = self.b - self.a;
        match self.kind {
            GridKind::Nodal => l / (self.n - 1) as f64,
            GridKind::Interior => l / (self.n + 1) as f64,
            GridKind::Cell => l / self.n as f64,
        }
    }

    pub fn node(&self, i: usize) -> f64 {
        let h = self.spacing();
        match self.kind {
            GridKind::Nodal => {
                if i + 1 == self.n {
                    self.b
                } else {
                    self.a + i as f64 * h
                }
            }
            GridKind::Interior => self.a + (i + 1) as f64 * h,
            GridKind::Cell => self.a + (i as f64 + 0.5) * h,
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Quadrature weight of sample `i`.
    pub fn weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        match self.kind {
            GridKind::Nodal if i == 0 || i + 1 == self.n => 0.5 * h,
            _ => h,
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.weight(i)).collect()
    }

    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}

/// Real samples of a function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    /// Wraps `values`; rejects wrong lengths and non-finite samples.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension { expected: grid.len(), got: values.len() });
        }
        check_finite(&values)?;
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, values: vec![0.0; grid.len()] }
    }

    pub fn constant(grid: Grid, value: f64) -> Self {
        Self { grid, values: vec![value; grid.len()] }
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        Self { grid, values: grid.nodes().into_iter().map(f).collect() }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_map(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &GridFunction) -> Result<Self> {
        self.zip_map(other, |a, b| a + s * b)
    }

    /// Serializes as `t,value` CSV rows with a header line.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().from_writer(out);
        w.write_record(["t", "value"])?;
        for (t, v) in self.grid.nodes().iter().zip(&self.values) {
            w.write_record([format_float(*t), format_float(*v)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Decimal float with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Weighted discrete L^r norm `(sum_i w_i |f_i|^r)^(1/r)`, `r > 1`.
pub fn lr_norm(f: &GridFunction, r: f64) -> Result<f64> {
    if !(r > 1.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("L^r exponent must exceed 1, got {r}")));
    }
    check_finite(&f.values)?;
    Ok(weighted_power_sum(f, r).powf(1.0 / r))
}

/// `sum_i w_i |f_i|^r`, the r-th power of the L^r norm.
pub(crate) fn weighted_power_sum(f: &GridFunction, r: f64) -> f64 {
    if r == 2.0 {
        return f.values.iter().enumerate().map(|(i, v)| f.grid.weight(i) * v * v).sum();
    }
    f.values
        .iter()
        .enumerate()
        .map(|(i, v)| f.grid.weight(i) * v.abs().powf(r))
        .sum()
}

/// Weighted L^1 norm, used for reporting reconstruction errors.
pub fn l1_norm(f: &GridFunction) -> f64 {
    f.values.iter().enumerate().map(|(i, v)| f.grid.weight(i) * v.abs()).sum()
}

pub fn l2_norm(f: &GridFunction) -> f64 {
    l2_inner_unchecked(f, f).sqrt()
}

/// Weighted L^2 inner product `sum_i w_i f_i g_i`.
pub fn l2_inner(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    f.grid.ensure_same(&g.grid)?;
    Ok(l2_inner_unchecked(f, g))
}

pub(crate) fn l2_inner_unchecked(f: &GridFunction, g: &GridFunction) -> f64 {
    f.values
        .iter()
        .zip(&g.values)
        .enumerate()
        .map(|(i, (a, b))| f.grid.weight(i) * (a * b))
        .sum()
}

/// Discrete total variation `sum_i |f_{i+1} - f_i|`.
pub fn total_variation(f: &GridFunction) -> f64 {
    f.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}
