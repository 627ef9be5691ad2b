//! Variational regularization of ill-posed problems with the Hanke-Raus
//! heuristic parameter choice.
//!
//! A run minimizes `||F(x) - y_noisy||_r^r + alpha R(x)` by projected
//! gradient descent for every `alpha` on the geometric grid
//! `{alpha_0 q^j}`, warm-starting down the grid, and then picks the
//! parameter minimizing `theta(alpha) = ||F(x_alpha) - y_noisy||^r / alpha`.
//! The discrepancy principle is available as a noise-level-aware baseline,
//! and [`theory`] checks the a-posteriori bounds on synthetic problems.
//!
//! ```
//! use regupath_core::noise::make_noisy;
//! use regupath_core::{
//!     compute_alpha_path, fredholm_model, hanke_raus_select, Fidelity, ForwardModel, GridFunction, NoiseSpec,
//!     Penalty, SolveOptions,
//! };
//!
//! # fn main() -> regupath_core::Result<()> {
//! let model = fredholm_model(401)?;
//! let x = GridFunction::from_fn(model.x_grid(), |t| t * (1.0 - t));
//! let (y_noisy, delta) = make_noisy(&model.apply(&x)?, &NoiseSpec::gaussian(0.01, 1), 2.0)?;
//! let fid = Fidelity::new(2.0, y_noisy)?;
//! let path = compute_alpha_path(&model, &fid, &Penalty::Quadratic, 1.0, 0.8, 40, &SolveOptions::default())?;
//! let choice = hanke_raus_select(&path)?;
//! assert!(choice.alpha_star < 1.0 && choice.delta_star > 0.0 && delta > 0.0);
//! # Ok(())
//! # }
//! ```

pub mod error;
pub mod experiment;
pub mod fidelity;
pub mod grid;
pub mod index_fn;
pub mod models;
pub mod noise;
pub mod penalty;
pub mod rules;
pub mod solver;
pub mod theory;
pub mod tridiag;

pub use error::{Error, Result};
pub use fidelity::{fidelity_gradient, Fidelity};
pub use grid::{l2_inner, l2_norm, lr_norm, Grid, GridFunction, GridKind};
pub use index_fn::{phi, phi_inverse, IndexFn, IndexFunction};
pub use models::{elliptic_model, fredholm_model, EllipticModel, ForwardModel, FredholmModel, IdentityModel};
pub use noise::{estimate_kappa, make_noisy, NoiseKind, NoiseSpec};
pub use penalty::{bregman_distance, penalty_subgradient, penalty_value, Penalty};
pub use rules::{discrepancy_select, hanke_raus_select, Rule, RuleOutcome};
pub use solver::{compute_alpha_path, solve_tikhonov, AlphaPathRecord, SolveOptions, StepRule};
pub use theory::{check_corollary_bounds, run_delta_sequence, Problem, TheoryReport};
pub use tridiag::{solve_tridiagonal, TridiagonalSystem};
