use crate::error::{Error, Result};
use crate::grid::{lr_norm, weighted_power_sum, GridFunction};

/// Data misfit `v -> ||v - target||_r^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fidelity {
    r: f64,
    target: GridFunction,
}

impl Fidelity {
    pub fn new(r: f64, target: GridFunction) -> Result<Self> {
        if !(r > 1.0 && r.is_finite()) {
            return Err(Error::InvalidArgument(format!("fidelity exponent must exceed 1, got {r}")));
        }
        Ok(Self { r, target })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn target(&self) -> &GridFunction {
        &self.target
    }

    pub fn value(&self, v: &GridFunction) -> Result<f64> {
        Ok(weighted_power_sum(&v.sub(&self.target)?, self.r))
    }

    /// `||v - target||_r`, the residual norm in the data space.
    pub fn residual_norm(&self, v: &GridFunction) -> Result<f64> {
        lr_norm(&v.sub(&self.target)?, self.r)
    }

    /// Weighted-L² representer of the derivative of [`Fidelity::value`]:
    /// `r |e|^(r-1) sign(e)` with `e = v - target`.
    pub fn gradient(&self, v: &GridFunction) -> Result<GridFunction> {
        let r = self.r;
        v.zip_map(&self.target, |a, b| {
            let e = a - b;
            if r == 2.0 {
                2.0 * e
            } else {
                r * e.abs().powf(r - 1.0) * e.signum()
            }
        })
    }
}

pub fn fidelity_gradient(fid: &Fidelity, v: &GridFunction) -> Result<GridFunction> {
    fid.gradient(v)
}
