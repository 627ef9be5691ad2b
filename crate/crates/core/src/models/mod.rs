//! Forward operators `F` with derivative and adjoint-derivative actions.
//!
//! Adjoints are taken with respect to the quadrature-weighted L² inner
//! products of the model's input and output grids.

mod elliptic;
mod fredholm;
mod identity;

pub use elliptic::{elliptic_model, EllipticModel};
pub use fredholm::{fredholm_kernel, fredholm_model, FredholmModel};
pub use identity::IdentityModel;

use crate::error::Result;
use crate::grid::{Grid, GridFunction};

/// The operator contract `F: D(F) ⊂ X -> Y`.
pub trait ForwardModel: Send + Sync {
    fn name(&self) -> &'static str;

    fn x_grid(&self) -> Grid;

    fn y_grid(&self) -> Grid;

    fn is_linear(&self) -> bool;

    /// `F(x)`.
    fn apply(&self, x: &GridFunction) -> Result<GridFunction>;

    /// `F'(x) h`.
    fn derivative(&self, x: &GridFunction, h: &GridFunction) -> Result<GridFunction>;

    /// `F'(x)^* w`.
    fn adjoint_derivative(&self, x: &GridFunction, w: &GridFunction) -> Result<GridFunction>;

    /// Whether `x` lies in the domain of `F`.
    fn domain_check(&self, x: &GridFunction) -> bool {
        x.grid() == &self.x_grid() && x.is_finite()
    }

    /// Maps a point back into the admissible set.
    fn project(&self, x: GridFunction) -> GridFunction {
        x
    }
}
