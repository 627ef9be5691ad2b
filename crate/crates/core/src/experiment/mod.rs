//! Experiment configuration, execution and result persistence.

mod bundle;
mod config;
mod functions;
pub mod plot;
pub mod presets;
mod run;

pub use bundle::{OutcomeSummary, PenaltyRun, ResultBundle};
pub use config::{ExperimentConfig, ExperimentKind, ModelSpec, PenaltyKindSpec, PenaltySpec, RuleSpec};
pub use functions::FunctionSpec;
pub use plot::emit_plots;
pub use run::{build_setup, run_experiment, run_paths, theory_problem, Setup};
