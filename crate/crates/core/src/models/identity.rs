use crate::error::Result;
use crate::grid::{Grid, GridFunction};

use super::ForwardModel;

/// `F(x) = x`, the denoising operator.
#[derive(Debug, Clone)]
pub struct IdentityModel {
    grid: Grid,
}

impl IdentityModel {
    pub fn new(grid: Grid) -> Self {
        Self { grid }
    }
}

impl ForwardModel for IdentityModel {
    fn name(&self) -> &'static str {
        "identity"
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
        self.grid.ensure_same(x.grid())?;
        Ok(x.clone())
    }

    fn derivative(&self, _x: &GridFunction, h: &GridFunction) -> Result<GridFunction> {
        self.apply(h)
    }

    fn adjoint_derivative(&self, _x: &GridFunction, w: &GridFunction) -> Result<GridFunction> {
        self.apply(w)
    }
}
