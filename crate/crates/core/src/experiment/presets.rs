//! Shipped experiment configurations.

use std::path::PathBuf;

use crate::noise::NoiseSpec;
use crate::solver::SolveOptions;

use super::config::{ExperimentConfig, ExperimentKind, ModelSpec, PenaltyKindSpec, PenaltySpec, RuleSpec};
use super::functions::FunctionSpec;

pub const PRESET_NAMES: [&str; 5] =
    ["example1", "example2_smooth", "example2_piecewise", "linear_benchmark", "constructed_source"];

/// Default seed of every preset.
pub const DEFAULT_SEED: u64 = 20160101;

pub fn by_name(name: &str) -> Option<ExperimentConfig> {
    match name {
        "example1" => Some(example1()),
        "example2_smooth" => Some(example2_smooth()),
        "example2_piecewise" => Some(example2_piecewise()),
        "linear_benchmark" => Some(linear_benchmark()),
        "constructed_source" => Some(constructed_source()),
        _ => None,
    }
}

pub fn all() -> Vec<ExperimentConfig> {
    PRESET_NAMES.iter().map(|n| by_name(n).expect("known preset")).collect()
}

fn penalty(label: &str, kind: PenaltyKindSpec) -> PenaltySpec {
    PenaltySpec { label: label.into(), kind }
}

fn elliptic() -> ModelSpec {
    ModelSpec::Elliptic {
        subintervals: 400,
        g0: 1.0,
        g1: 6.0,
        source: FunctionSpec::GaussianBump { amplitude: 100.0, center: 0.5, width: 10.0 },
    }
}

/// Integral equation with impulsive noise, `L^1.01` fidelity.
pub fn example1() -> ExperimentConfig {
    ExperimentConfig {
        experiment: ExperimentKind::Example1,
        model: ModelSpec::Fredholm { n: 401 },
        truth: FunctionSpec::Example1Truth,
        r: 1.01,
        penalties: vec![penalty("quadratic", PenaltyKindSpec::Quadratic)],
        rules: vec![RuleSpec::HankeRaus, RuleSpec::Discrepancy { taus: vec![1.01, 1.615, 0.996] }],
        alpha0: 1.0,
        q: 0.95,
        j_max: 120,
        noise: NoiseSpec::impulsive(0.02, 1.0, DEFAULT_SEED),
        solver: SolveOptions::default(),
        init: FunctionSpec::Zero,
        source_condition: None,
        output_dir: PathBuf::from("out/example1"),
        not_from_paper: vec![
            "model.n".into(),
            "noise.fraction".into(),
            "noise.amplitude".into(),
            "noise.seed".into(),
            "j_max".into(),
            "solver".into(),
        ],
    }
}

/// Smooth coefficient, penalties `||c||²` and `||c - t||²`.
pub fn example2_smooth() -> ExperimentConfig {
    ExperimentConfig {
        experiment: ExperimentKind::Example2Smooth,
        model: elliptic(),
        truth: FunctionSpec::Example2SmoothTruth,
        r: 2.0,
        penalties: vec![
            penalty("r1", PenaltyKindSpec::Quadratic),
            penalty(
                "r2",
                PenaltyKindSpec::ShiftedQuadratic {
                    reference: FunctionSpec::Linear { slope: 1.0, intercept: 0.0 },
                },
            ),
        ],
        rules: vec![RuleSpec::HankeRaus],
        alpha0: 0.005,
        q: 0.8,
        j_max: 40,
        noise: NoiseSpec::gaussian(0.0025, DEFAULT_SEED),
        solver: SolveOptions::default(),
        init: FunctionSpec::Constant { value: 1.0 },
        source_condition: None,
        output_dir: PathBuf::from("out/example2_smooth"),
        not_from_paper: vec!["noise.seed".into(), "j_max".into(), "init".into(), "solver".into()],
    }
}

/// Piecewise-constant coefficient, smoothed TV plus `mu ||c||²`, with a
/// quadratic-penalty comparison on the same data.
pub fn example2_piecewise() -> ExperimentConfig {
    ExperimentConfig {
        experiment: ExperimentKind::Example2Piecewise,
        model: elliptic(),
        truth: FunctionSpec::PiecewiseConstant { breakpoints: vec![0.3, 0.65], values: vec![1.0, 3.0, 1.5] },
        r: 2.0,
        penalties: vec![
            penalty("tv", PenaltyKindSpec::SmoothedTv { epsilon: 1.0, mu: 0.001 }),
            penalty("quadratic", PenaltyKindSpec::Quadratic),
        ],
        rules: vec![RuleSpec::HankeRaus],
        alpha0: 0.001,
        q: 0.8,
        j_max: 40,
        noise: NoiseSpec::gaussian(0.001, DEFAULT_SEED),
        solver: SolveOptions::default(),
        init: FunctionSpec::Constant { value: 1.0 },
        source_condition: None,
        output_dir: PathBuf::from("out/example2_piecewise"),
        not_from_paper: vec![
            "truth".into(),
            "penalties.tv.epsilon".into(),
            "penalties.quadratic".into(),
            "noise.seed".into(),
            "j_max".into(),
            "init".into(),
            "solver".into(),
        ],
    }
}

/// Quadratic Tikhonov on the integral equation with Gaussian noise.
pub fn linear_benchmark() -> ExperimentConfig {
    ExperimentConfig {
        experiment: ExperimentKind::Custom,
        model: ModelSpec::Fredholm { n: 401 },
        truth: FunctionSpec::Example1Truth,
        r: 2.0,
        penalties: vec![penalty("quadratic", PenaltyKindSpec::Quadratic)],
        rules: vec![RuleSpec::HankeRaus],
        alpha0: 1.0,
        q: 0.8,
        j_max: 60,
        noise: NoiseSpec::gaussian(0.01, DEFAULT_SEED),
        solver: SolveOptions::default(),
        init: FunctionSpec::Zero,
        source_condition: None,
        output_dir: PathBuf::from("out/linear_benchmark"),
        not_from_paper: vec!["experiment".into()],
    }
}

/// Linear benchmark with the truth `x† = K w`, `w(t) = sin(pi t)`, for which
/// the source condition holds with `phi(t) = 2 ||w|| t`.
pub fn constructed_source() -> ExperimentConfig {
    ExperimentConfig {
        truth: FunctionSpec::ConstructedSource {
            w: Box::new(FunctionSpec::Sine { amplitude: 1.0, frequency: 1.0 }),
        },
        output_dir: PathBuf::from("out/constructed_source"),
        not_from_paper: vec!["experiment".into(), "truth".into()],
        ..linear_benchmark()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseKind;

    #[test]
    fn presets_validate() {
        for cfg in all() {
            assert!(cfg.validation_errors().is_empty(), "{:?}", cfg.validation_errors());
        }
        assert!(by_name("nope").is_none());
    }

    #[test]
    fn published_constants() {
        let e1 = example1();
        assert_eq!((e1.r, e1.alpha0, e1.q), (1.01, 1.0, 0.95));
        assert_eq!(e1.penalties[0].kind, PenaltyKindSpec::Quadratic);
        assert_eq!(e1.rules[1], RuleSpec::Discrepancy { taus: vec![1.01, 1.615, 0.996] });

        let smooth = example2_smooth();
        assert_eq!((smooth.r, smooth.alpha0, smooth.q), (2.0, 0.005, 0.8));
        assert_eq!(smooth.noise.kind, NoiseKind::Gaussian { level: 0.0025 });
        assert_eq!(smooth.penalties[0].kind, PenaltyKindSpec::Quadratic);
        assert_eq!(
            smooth.penalties[1].kind,
            PenaltyKindSpec::ShiftedQuadratic { reference: FunctionSpec::Linear { slope: 1.0, intercept: 0.0 } }
        );
        assert_eq!(
            smooth.model,
            ModelSpec::Elliptic {
                subintervals: 400,
                g0: 1.0,
                g1: 6.0,
                source: FunctionSpec::GaussianBump { amplitude: 100.0, center: 0.5, width: 10.0 },
            }
        );

        let pw = example2_piecewise();
        assert_eq!((pw.r, pw.alpha0, pw.q), (2.0, 0.001, 0.8));
        assert_eq!(pw.noise.kind, NoiseKind::Gaussian { level: 0.001 });
        assert!(matches!(pw.penalties[0].kind, PenaltyKindSpec::SmoothedTv { mu, .. } if mu == 0.001));
    }

    #[test]
    fn our_choices_are_flagged() {
        let e1 = example1();
        for key in ["model.n", "noise.fraction", "noise.amplitude"] {
            assert!(e1.not_from_paper.iter().any(|k| k == key), "{key}");
        }
    }
}
