use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fidelity::Fidelity;
use crate::grid::{l1_norm, l2_norm, total_variation, Grid, GridFunction};
use crate::index_fn::IndexFunction;
use crate::models::{EllipticModel, ForwardModel};
use crate::noise::make_noisy;
use crate::penalty::Penalty;
use crate::rules::{discrepancy_select, hanke_raus_select, RuleOutcome};
use crate::solver::{compute_alpha_path, AlphaPathRecord, SolveOptions};
use crate::theory::Problem;

use super::bundle::{OutcomeSummary, PenaltyRun, ResultBundle};
use super::config::{ExperimentConfig, ModelSpec, PenaltyKindSpec, RuleSpec};
use super::functions::FunctionSpec;

/// Everything an experiment needs before the first solve.
#[derive(Clone)]
pub struct Setup {
    pub model: Arc<dyn ForwardModel>,
    pub x_dagger: GridFunction,
    pub y_exact: GridFunction,
    pub y_noisy: GridFunction,
    pub noise: GridFunction,
    /// `||y_noisy - y_exact||_r`.
    pub delta: f64,
    pub penalties: Vec<(String, Penalty)>,
    pub init: GridFunction,
    pub index_fn: Option<IndexFunction>,
}

impl Setup {
    pub fn solve_options(&self, cfg: &ExperimentConfig) -> SolveOptions {
        SolveOptions { init: Some(self.init.clone()), ..cfg.solver.clone() }
    }
}

/// Builds model, truth and noisy data. Fails with every configuration error
/// at once.
pub fn build_setup(cfg: &ExperimentConfig) -> Result<Setup> {
    cfg.validate()?;
    let model: Arc<dyn ForwardModel> = match &cfg.model {
        ModelSpec::Fredholm { n } => Arc::new(crate::models::fredholm_model(*n)?),
        ModelSpec::Elliptic { subintervals, g0, g1, source } => {
            let src = source.clone();
            Arc::new(EllipticModel::with_source_fn(*subintervals, *g0, *g1, move |t| src.eval(t))?)
        }
    };
    let xg = model.x_grid();
    let (x_dagger, source_w) = match &cfg.truth {
        FunctionSpec::ConstructedSource { w } => {
            // Validation restricts constructed sources to the integral model.
            let w = sample(xg, w);
            (model.apply(&w)?, Some(w))
        }
        spec => (sample(xg, spec), None),
    };
    if !model.domain_check(&x_dagger) {
        return Err(Error::Config(vec![format!("truth lies outside the domain of the {} model", model.name())]));
    }
    let y_exact = model.apply(&x_dagger)?;
    let (y_noisy, delta) = make_noisy(&y_exact, &cfg.noise, cfg.r)?;
    let noise = y_noisy.sub(&y_exact)?;

    let penalties = cfg
        .penalties
        .iter()
        .map(|p| {
            let pen = match &p.kind {
                PenaltyKindSpec::Quadratic => Penalty::Quadratic,
                PenaltyKindSpec::ShiftedQuadratic { reference } => {
                    Penalty::ShiftedQuadratic { reference: sample(xg, reference) }
                }
                PenaltyKindSpec::SmoothedTv { epsilon, mu } => Penalty::smoothed_tv(*epsilon, *mu)?,
            };
            Ok((p.label.clone(), pen))
        })
        .collect::<Result<Vec<_>>>()?;

    // For x† = K w with R = ||x||² and r = 2, self-adjointness of K gives
    // <2x†, x† - x> = <2w, K(x† - x)> <= 2||w|| ||F(x) - F(x†)||.
    let index_fn = cfg.source_condition.or_else(|| match (&source_w, penalties.first()) {
        (Some(w), Some((_, Penalty::Quadratic))) if cfg.r == 2.0 => {
            Some(IndexFunction::Linear { k: 2.0 * l2_norm(w) })
        }
        _ => None,
    });

    Ok(Setup {
        model,
        x_dagger,
        y_exact,
        y_noisy,
        noise,
        delta,
        penalties,
        init: sample(xg, &cfg.init),
        index_fn,
    })
}

fn sample(grid: Grid, spec: &FunctionSpec) -> GridFunction {
    GridFunction::from_fn(grid, |t| spec.eval(t))
}

/// The alpha paths only, one per penalty, without any parameter choice.
pub fn run_paths(cfg: &ExperimentConfig) -> Result<ResultBundle> {
    let setup = build_setup(cfg)?;
    let paths = compute_paths(cfg, &setup)?;
    let runs = setup
        .penalties
        .iter()
        .zip(paths)
        .map(|((label, pen), path)| penalty_run(&setup, label, pen, path, Vec::new()))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResultBundle::new(cfg.clone(), &setup, runs))
}

/// Computes the paths and applies every configured rule to each of them.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultBundle> {
    let setup = build_setup(cfg)?;
    let paths = compute_paths(cfg, &setup)?;
    let runs = setup
        .penalties
        .iter()
        .zip(paths)
        .map(|((label, pen), path)| {
            let mut outcomes = Vec::new();
            for rule in &cfg.rules {
                match rule {
                    RuleSpec::HankeRaus => outcomes.push(hanke_raus_select(&path)?),
                    RuleSpec::Discrepancy { taus } => {
                        for &tau in taus {
                            outcomes.push(discrepancy_select(&path, tau, setup.delta)?);
                        }
                    }
                }
            }
            penalty_run(&setup, label, pen, path, outcomes)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResultBundle::new(cfg.clone(), &setup, runs))
}

fn compute_paths(cfg: &ExperimentConfig, setup: &Setup) -> Result<Vec<Vec<AlphaPathRecord>>> {
    let fid = Fidelity::new(cfg.r, setup.y_noisy.clone())?;
    let opts = setup.solve_options(cfg);
    setup
        .penalties
        .par_iter()
        .map(|(label, pen)| {
            log::info!("computing alpha path for penalty {label}");
            compute_alpha_path(setup.model.as_ref(), &fid, pen, cfg.alpha0, cfg.q, cfg.j_max, &opts)
                .map_err(Error::from)
        })
        .collect()
}

fn penalty_run(
    setup: &Setup,
    label: &str,
    pen: &Penalty,
    path: Vec<AlphaPathRecord>,
    outcomes: Vec<RuleOutcome>,
) -> Result<PenaltyRun> {
    let xi_dagger = pen.subgradient(&setup.x_dagger)?;
    let errors = path
        .iter()
        .map(|rec| {
            let diff = rec.x.sub(&setup.x_dagger)?;
            Ok(PathErrors {
                bregman: pen.bregman_distance(&xi_dagger, &rec.x, &setup.x_dagger)?,
                l2: l2_norm(&diff),
                l1: l1_norm(&diff),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summaries = outcomes
        .iter()
        .map(|o| {
            let rec = o.record();
            let e = &errors[o.index];
            OutcomeSummary {
                rule: o.rule.label(),
                alpha_star: o.alpha_star,
                index: o.index,
                delta_star: o.delta_star,
                theta_star: rec.theta,
                l2_error: e.l2,
                l1_error: e.l1,
                bregman: e.bregman,
                tv: total_variation(&rec.x),
                no_qualifying_alpha: o.flags.no_qualifying_alpha,
                delta_star_small: o.flags.delta_star_small,
            }
        })
        .collect();
    Ok(PenaltyRun {
        label: label.to_string(),
        path,
        bregman_to_truth: errors.iter().map(|e| e.bregman).collect(),
        l2_error_to_truth: errors.iter().map(|e| e.l2).collect(),
        l1_error_to_truth: errors.iter().map(|e| e.l1).collect(),
        outcomes: summaries,
    })
}

struct PathErrors {
    bregman: f64,
    l2: f64,
    l1: f64,
}

/// The synthetic problem of `cfg` for the a-posteriori bound checks, using
/// the first configured penalty.
pub fn theory_problem(cfg: &ExperimentConfig) -> Result<Problem> {
    let setup = build_setup(cfg)?;
    let (_, penalty) = setup.penalties.first().cloned().ok_or(Error::EmptyPath)?;
    let mut problem = Problem::new(
        setup.model.clone(),
        setup.x_dagger.clone(),
        penalty,
        cfg.r,
        cfg.alpha0,
        cfg.q,
        cfg.j_max,
    )?;
    problem.opts = setup.solve_options(cfg);
    problem.index_fn = setup.index_fn;
    Ok(problem)
}
