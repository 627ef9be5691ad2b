//! Empirical checks of the a-posteriori bounds for the Hanke-Raus choice and
//! noise-level sequences `delta -> 0`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fidelity::Fidelity;
use crate::grid::{format_float, l2_norm, lr_norm, GridFunction};
use crate::index_fn::{IndexFn, IndexFunction};
use crate::models::ForwardModel;
use crate::noise::{estimate_kappa, unit_direction};
use crate::penalty::Penalty;
use crate::rules::{hanke_raus_select, Rule, RuleOutcome};
use crate::solver::{compute_alpha_path, SolveOptions};

/// Slack granted to every bound comparison.
pub const BOUND_SLACK: f64 = 1e-10;

/// One noise level of a `delta -> 0` study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub delta: f64,
    pub alpha_star: f64,
    pub theta_star: f64,
    pub delta_star: f64,
    /// `D_{xi†} R(x_{alpha_*}, x†)`.
    pub bregman: f64,
    /// `||x_{alpha_*} - x†||_{L²}`.
    pub l2_error: f64,
    /// See [`TheoryReport::bound_ratio`].
    pub bound_ratio: Option<f64>,
}

/// Outcome of checking the a-posteriori bounds for one Hanke-Raus choice.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryReport {
    /// `None` when the noise vanishes and kappa is undefined.
    pub kappa_estimate: Option<f64>,
    pub delta: f64,
    pub delta_star: f64,
    pub alpha_star: f64,
    /// `q kappa^r delta^r / ((q + 1) R(x†))`; `None` if degenerate or `R(x†) = 0`.
    pub lower_bound_alpha: Option<f64>,
    /// `||y_noisy - y||^r <= alpha_0 R(x†)`.
    pub precondition_holds: bool,
    pub delta_star_bound_holds: bool,
    pub alpha_star_bound_holds: bool,
    /// `theta(alpha) >= (kappa delta)^r / alpha` along the whole path.
    pub theta_lower_bound_holds: bool,
    /// The rule picked the last (smallest) grid value.
    pub selected_at_grid_end: bool,
    pub bregman: f64,
    /// `D / ((1 + delta^r/delta_*^r)(delta^r + phi(delta + delta_*)))` when an
    /// index function is known.
    pub bound_ratio: Option<f64>,
    pub convergence_table: Vec<ConvergenceRow>,
}

impl TheoryReport {
    pub fn degenerate(&self) -> bool {
        self.kappa_estimate.is_none()
    }

    /// Whether the bounds were tested at all (non-degenerate, precondition met).
    pub fn applicable(&self) -> bool {
        !self.degenerate() && self.precondition_holds && self.lower_bound_alpha.is_some()
    }

    /// Both corollary inequalities hold, or they do not apply.
    pub fn bounds_ok(&self) -> bool {
        !self.applicable() || (self.delta_star_bound_holds && self.alpha_star_bound_holds)
    }

    /// One row per noise level:
    /// `delta,alpha_star,theta_star,delta_star,bregman,l2_error,bound_ratio`.
    pub fn table_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["delta", "alpha_star", "theta_star", "delta_star", "bregman", "l2_error", "bound_ratio"])?;
        for row in &self.convergence_table {
            let mut rec: Vec<String> =
                [row.delta, row.alpha_star, row.theta_star, row.delta_star, row.bregman, row.l2_error]
                    .map(format_float)
                    .to_vec();
            rec.push(row.bound_ratio.map(format_float).unwrap_or_default());
            w.write_record(&rec)?;
        }
        into_string(w)
    }

    /// `key,value` summary block.
    pub fn summary_csv(&self) -> Result<String> {
        let opt = |v: Option<f64>| v.map(format_float).unwrap_or_default();
        let rows = [
            ("kappa_estimate", opt(self.kappa_estimate)),
            ("delta", format_float(self.delta)),
            ("delta_star", format_float(self.delta_star)),
            ("alpha_star", format_float(self.alpha_star)),
            ("lower_bound_alpha", opt(self.lower_bound_alpha)),
            ("precondition_holds", self.precondition_holds.to_string()),
            ("delta_star_bound_holds", self.delta_star_bound_holds.to_string()),
            ("alpha_star_bound_holds", self.alpha_star_bound_holds.to_string()),
            ("theta_lower_bound_holds", self.theta_lower_bound_holds.to_string()),
            ("selected_at_grid_end", self.selected_at_grid_end.to_string()),
            ("bregman", format_float(self.bregman)),
            ("bound_ratio", opt(self.bound_ratio)),
            ("degenerate", self.degenerate().to_string()),
        ];
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["key", "value"])?;
        for (k, v) in rows {
            w.write_record([k, v.as_str()])?;
        }
        into_string(w)
    }
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// A synthetic problem with known truth.
#[derive(Clone)]
pub struct Problem {
    pub model: Arc<dyn ForwardModel>,
    pub x_dagger: GridFunction,
    /// Exact data `F(x†)`.
    pub y_exact: GridFunction,
    pub penalty: Penalty,
    pub r: f64,
    pub alpha0: f64,
    pub q: f64,
    pub j_max: usize,
    pub opts: SolveOptions,
    /// Index function of a known variational source condition, if any.
    pub index_fn: Option<IndexFunction>,
}

impl Problem {
    pub fn new(
        model: Arc<dyn ForwardModel>,
        x_dagger: GridFunction,
        penalty: Penalty,
        r: f64,
        alpha0: f64,
        q: f64,
        j_max: usize,
    ) -> Result<Self> {
        let y_exact = model.apply(&x_dagger)?;
        Ok(Self {
            model,
            x_dagger,
            y_exact,
            penalty,
            r,
            alpha0,
            q,
            j_max,
            opts: SolveOptions::default(),
            index_fn: None,
        })
    }

    /// Computes the path for `y_noisy` and applies the Hanke-Raus rule.
    pub fn hanke_raus(&self, y_noisy: &GridFunction) -> Result<RuleOutcome> {
        let fid = Fidelity::new(self.r, y_noisy.clone())?;
        let path = compute_alpha_path(
            self.model.as_ref(),
            &fid,
            &self.penalty,
            self.alpha0,
            self.q,
            self.j_max,
            &self.opts,
        )?;
        hanke_raus_select(&path)
    }
}

/// Checks `delta_* >= kappa delta` and
/// `alpha_* >= q kappa^r delta^r / ((q + 1) R(x†))` with the empirical kappa
/// taken over the residual directions `F(x_alpha) - y` of the path.
pub fn check_corollary_bounds(outcome: &RuleOutcome, problem: &Problem, noise: &GridFunction) -> Result<TheoryReport> {
    if outcome.rule != Rule::HankeRaus {
        return Err(Error::InvalidArgument("bounds apply to Hanke-Raus outcomes".into()));
    }
    let r = problem.r;
    let q = problem.q;
    let delta = lr_norm(noise, r)?;
    let rec = outcome.record();
    let delta_star = outcome.delta_star;
    let xi_dagger = problem.penalty.subgradient(&problem.x_dagger)?;
    let bregman = problem.penalty.bregman_distance(&xi_dagger, &rec.x, &problem.x_dagger)?;
    let r_dagger = problem.penalty.value(&problem.x_dagger)?;
    let precondition_holds = delta.powf(r) <= problem.alpha0 * r_dagger;
    let selected_at_grid_end = outcome.index + 1 == outcome.path.len();

    let bound_ratio = match problem.index_fn {
        Some(phi) if delta_star > 0.0 => {
            let denom = (1.0 + delta.powf(r) / delta_star.powf(r))
                * (delta.powf(r) + phi.eval(delta + delta_star));
            Some(bregman / denom)
        }
        _ => None,
    };

    if delta == 0.0 {
        return Ok(TheoryReport {
            kappa_estimate: None,
            delta,
            delta_star,
            alpha_star: outcome.alpha_star,
            lower_bound_alpha: None,
            precondition_holds,
            delta_star_bound_holds: false,
            alpha_star_bound_holds: false,
            theta_lower_bound_holds: false,
            selected_at_grid_end,
            bregman,
            bound_ratio,
            convergence_table: Vec::new(),
        });
    }

    let candidates = outcome
        .path
        .iter()
        .map(|p| problem.model.apply(&p.x)?.sub(&problem.y_exact))
        .collect::<Result<Vec<_>>>()?;
    let kappa = estimate_kappa(noise, &candidates, r)?;
    let floor = (kappa * delta).powf(r);
    let lower_bound_alpha =
        (r_dagger > 0.0).then(|| q * floor / ((q + 1.0) * r_dagger));

    Ok(TheoryReport {
        kappa_estimate: Some(kappa),
        delta,
        delta_star,
        alpha_star: outcome.alpha_star,
        lower_bound_alpha,
        precondition_holds,
        delta_star_bound_holds: delta_star >= kappa * delta - BOUND_SLACK,
        alpha_star_bound_holds: lower_bound_alpha.is_some_and(|lb| outcome.alpha_star >= lb - BOUND_SLACK),
        theta_lower_bound_holds: outcome
            .path
            .iter()
            .all(|p| p.theta >= floor / p.alpha - BOUND_SLACK * (1.0 + floor / p.alpha)),
        selected_at_grid_end,
        bregman,
        bound_ratio,
        convergence_table: Vec::new(),
    })
}

/// Runs the Hanke-Raus rule on `y + delta_k e` for a fixed unit direction `e` drawn from
/// `seed`, one row per level. Levels run concurrently; rows keep the input
/// order. The scalar fields of the report describe the last (smallest) level.
pub fn run_delta_sequence(problem: &Problem, deltas: &[f64], seed: u64) -> Result<TheoryReport> {
    if deltas.is_empty() {
        return Err(Error::InvalidArgument("need at least one noise level".into()));
    }
    if deltas.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(Error::InvalidArgument("noise levels must be positive".into()));
    }
    if deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument("noise levels must be strictly decreasing".into()));
    }
    let direction = unit_direction(*problem.y_exact.grid(), seed, problem.r)?;
    let levels = deltas
        .par_iter()
        .map(|&delta| {
            let noise = direction.scale(delta);
            let outcome = problem.hanke_raus(&problem.y_exact.add(&noise)?)?;
            let report = check_corollary_bounds(&outcome, problem, &noise)?;
            let rec = outcome.record();
            let row = ConvergenceRow {
                delta,
                alpha_star: outcome.alpha_star,
                theta_star: rec.theta,
                delta_star: outcome.delta_star,
                bregman: report.bregman,
                l2_error: l2_norm(&rec.x.sub(&problem.x_dagger)?),
                bound_ratio: report.bound_ratio,
            };
            Ok((row, report))
        })
        .collect::<Result<Vec<_>>>()?;
    let (rows, reports): (Vec<_>, Vec<_>) = levels.into_iter().unzip();
    let mut report = reports.into_iter().last().expect("at least one level");
    report.convergence_table = rows;
    Ok(report)
}

/// `(2 / alpha) F'(x)^* (y - F(x))`: the subgradient certified by the
/// optimality condition of `||F(x) - y||² + alpha R(x)` at its minimizer.
pub fn optimality_subgradient(
    model: &dyn ForwardModel,
    x: &GridFunction,
    y: &GridFunction,
    alpha: f64,
) -> Result<GridFunction> {
    let misfit = y.sub(&model.apply(x)?)?;
    Ok(model.adjoint_derivative(x, &misfit)?.scale(2.0 / alpha))
}
