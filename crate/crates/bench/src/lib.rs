//! Shared fixtures for the benchmarks.

use regupath_core::experiment::{build_setup, presets, Setup};
use regupath_core::{Fidelity, SolveOptions};

/// The linear benchmark at `n` nodes with its noisy data.
pub fn linear_fixture(n: usize) -> (Setup, Fidelity, SolveOptions) {
    let mut cfg = presets::linear_benchmark();
    cfg.model = regupath_core::experiment::ModelSpec::Fredholm { n };
    let setup = build_setup(&cfg).expect("preset is valid");
    let fid = Fidelity::new(cfg.r, setup.y_noisy.clone()).expect("r > 1");
    let opts = setup.solve_options(&cfg);
    (setup, fid, opts)
}
