//! Projected backtracking gradient descent for
//! `T_alpha(x) = ||F(x) - y_noisy||_r^r + alpha R(x)` and warm-started sweeps
//! over the geometric grid `alpha_0 q^j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fidelity::Fidelity;
use crate::grid::{l2_inner_unchecked, l2_norm, GridFunction};
use crate::models::ForwardModel;
use crate::penalty::Penalty;

/// Paths stop once `alpha` drops below this.
pub const MIN_ALPHA: f64 = 1e-12;
/// Paths stop once `residual^r` drops below this (data fitted exactly).
pub const MIN_RESIDUAL_POWER: f64 = 1e-14;
/// Backtracking halvings before an iteration is declared stalled.
const MAX_BACKTRACKS: usize = 80;

/// Armijo backtracking parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StepRule {
    pub initial_step: f64,
    pub shrink: f64,
    pub sufficient_decrease: f64,
    /// Seed each line search with the Barzilai-Borwein step instead of
    /// `initial_step`. Acceptance still requires the Armijo condition.
    pub barzilai_borwein: bool,
    /// The Armijo condition compares against the largest of the last
    /// `memory` objective values; `1` gives a monotone descent.
    pub memory: usize,
}

impl Default for StepRule {
    fn default() -> Self {
        Self { initial_step: 1.0, shrink: 0.5, sufficient_decrease: 1e-4, barzilai_borwein: true, memory: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveOptions {
    pub max_iters: usize,
    /// Stop when the projected gradient norm falls below `grad_tol` times
    /// `||F'(x)^* grad fid|| + alpha ||grad R(x)||`, the size of the two terms
    /// that cancel at a minimizer.
    pub grad_tol: f64,
    pub step_rule: StepRule,
    /// Starting point; `None` means the zero function.
    #[serde(skip)]
    pub init: Option<GridFunction>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { max_iters: 5000, grad_tol: 1e-8, step_rule: StepRule::default(), init: None }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let s = &self.step_rule;
        if self.max_iters == 0 {
            errs.push("max_iters must be positive".into());
        }
        if !(self.grad_tol > 0.0) {
            errs.push(format!("grad_tol must be positive, got {}", self.grad_tol));
        }
        if !(s.initial_step > 0.0 && s.initial_step.is_finite()) {
            errs.push(format!("initial_step must be positive, got {}", s.initial_step));
        }
        if !(s.shrink > 0.0 && s.shrink < 1.0) {
            errs.push(format!("shrink must lie in (0, 1), got {}", s.shrink));
        }
        if s.memory == 0 {
            errs.push("step_rule.memory must be positive".into());
        }
        if !(s.sufficient_decrease > 0.0 && s.sufficient_decrease < 1.0) {
            errs.push(format!(
                "sufficient_decrease must lie in (0, 1), got {}",
                s.sufficient_decrease
            ));
        }
        errs
    }
}

/// Solver output for one grid value of `alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaPathRecord {
    /// Grid index: `alpha = alpha_0 q^j`.
    pub j: usize,
    pub alpha: f64,
    pub x: GridFunction,
    /// `||F(x) - y_noisy||_r`.
    pub residual: f64,
    /// `R(x)`.
    pub penalty: f64,
    /// `residual^r / alpha`.
    pub theta: f64,
    pub objective: f64,
    pub iters: usize,
    pub converged: bool,
}

struct Objective<'a> {
    model: &'a dyn ForwardModel,
    fid: &'a Fidelity,
    pen: &'a Penalty,
    alpha: f64,
}

struct Point {
    x: GridFunction,
    fx: GridFunction,
    value: f64,
}

impl Objective<'_> {
    fn eval(&self, x: GridFunction) -> Result<Point> {
        let fx = self.model.apply(&x)?;
        let value = self.fid.value(&fx)? + self.alpha * self.pen.value(&x)?;
        Ok(Point { x, fx, value })
    }

    /// Gradient of `T_alpha` and the scale `||fidelity part|| + alpha ||penalty part||`.
    fn gradient(&self, p: &Point) -> Result<(GridFunction, f64)> {
        let misfit = self.fid.gradient(&p.fx)?;
        let g_fid = self.model.adjoint_derivative(&p.x, &misfit)?;
        let g_pen = self.pen.subgradient(&p.x)?;
        let scale = l2_norm(&g_fid) + self.alpha * l2_norm(&g_pen);
        Ok((g_fid.axpy(self.alpha, &g_pen)?, scale))
    }

    fn record(&self, j: usize, p: Point, iters: usize, converged: bool) -> Result<AlphaPathRecord> {
        let r = self.fid.r();
        let residual = self.fid.residual_norm(&p.fx)?;
        let penalty = self.pen.value(&p.x)?;
        Ok(AlphaPathRecord {
            j,
            alpha: self.alpha,
            residual,
            penalty,
            theta: residual.powf(r) / self.alpha,
            objective: p.value,
            iters,
            converged,
            x: p.x,
        })
    }
}

fn projected_gradient_norm(model: &dyn ForwardModel, x: &GridFunction, g: &GridFunction) -> Result<f64> {
    let moved = model.project(x.axpy(-1.0, g)?);
    Ok(l2_norm(&x.sub(&moved)?))
}

fn minimize(
    model: &dyn ForwardModel,
    fid: &Fidelity,
    pen: &Penalty,
    alpha: f64,
    j: usize,
    start: GridFunction,
    opts: &SolveOptions,
) -> Result<AlphaPathRecord> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    let errs = opts.validate();
    if !errs.is_empty() {
        return Err(Error::Config(errs));
    }
    model.x_grid().ensure_same(start.grid())?;
    model.y_grid().ensure_same(fid.target().grid())?;

    let obj = Objective { model, fid, pen, alpha };
    let rule = opts.step_rule;
    let mut cur = obj.eval(model.project(start))?;
    if !cur.value.is_finite() {
        return Err(Error::Divergence { alpha, iters: 0 });
    }
    let (mut grad, mut scale) = obj.gradient(&cur)?;
    if projected_gradient_norm(model, &cur.x, &grad)? <= opts.grad_tol * scale {
        return obj.record(j, cur, 0, true);
    }
    let mut step = rule.initial_step;
    let mut prev: Option<(GridFunction, GridFunction)> = None;
    let mut history = std::collections::VecDeque::with_capacity(rule.memory);
    let mut best: Option<Point> = None;
    let mut iters = 0;
    let mut converged = false;

    while iters < opts.max_iters {
        if rule.barzilai_borwein {
            if let Some((px, pg)) = &prev {
                let s = cur.x.sub(px)?;
                let y = grad.sub(pg)?;
                let sy = l2_inner_unchecked(&s, &y);
                let ss = l2_inner_unchecked(&s, &s);
                step = if sy > 0.0 && (ss / sy).is_finite() { ss / sy } else { 2.0 * step };
            }
        } else {
            step = rule.initial_step;
        }
        if history.len() == rule.memory {
            history.pop_front();
        }
        history.push_back(cur.value);
        let reference = history.iter().copied().fold(f64::NEG_INFINITY, f64::max);

        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial_x = model.project(cur.x.axpy(-step, &grad)?);
            let trial = obj.eval(trial_x)?;
            let slope = l2_inner_unchecked(&grad, &trial.x.sub(&cur.x)?);
            if trial.value.is_finite() && slope < 0.0 && trial.value <= reference + rule.sufficient_decrease * slope {
                accepted = Some(trial);
                break;
            }
            step *= rule.shrink;
        }
        let Some(next) = accepted else {
            // No representable step decreases the objective.
            break;
        };
        iters += 1;
        let (next_grad, next_scale) = obj.gradient(&next)?;
        let old = std::mem::replace(&mut cur, next);
        prev = Some((old.x.clone(), std::mem::replace(&mut grad, next_grad)));
        scale = next_scale;
        if best.as_ref().is_none_or(|b| old.value < b.value) {
            best = Some(old);
        }
        if projected_gradient_norm(model, &cur.x, &grad)? <= opts.grad_tol * scale {
            converged = true;
            break;
        }
    }
    // A non-monotone search may end above an earlier iterate.
    if let Some(b) = best {
        if b.value < cur.value {
            return obj.record(j, b, iters, converged);
        }
    }
    obj.record(j, cur, iters, converged)
}

/// Minimizes `T_alpha` from `opts.init` (zero when absent).
pub fn solve_tikhonov(
    model: &dyn ForwardModel,
    fid: &Fidelity,
    pen: &Penalty,
    alpha: f64,
    opts: &SolveOptions,
) -> Result<AlphaPathRecord> {
    let start = opts.init.clone().unwrap_or_else(|| GridFunction::zeros(model.x_grid()));
    minimize(model, fid, pen, alpha, 0, start, opts)
}

/// `alpha_0 q^j` for `j = 0..=j_max`.
pub fn alpha_grid(alpha0: f64, q: f64, j_max: usize) -> Vec<f64> {
    (0..=j_max).map(|j| alpha0 * q.powi(j as i32)).collect()
}

/// A path that stopped early on a solver error.
#[derive(Debug)]
pub struct PathFailure {
    pub records: Vec<AlphaPathRecord>,
    pub source: Error,
}

impl From<PathFailure> for Error {
    fn from(f: PathFailure) -> Self {
        Error::PathAborted { completed: f.records.len(), source: Box::new(f.source) }
    }
}

/// Solves along `alpha_0 q^j`, `j = 0..=j_max`, in decreasing `alpha`, each
/// solve warm-started from the previous minimizer.
///
/// The sweep also stops after the first record with `alpha < MIN_ALPHA` or
/// `residual^r <= MIN_RESIDUAL_POWER`.
pub fn compute_alpha_path(
    model: &dyn ForwardModel,
    fid: &Fidelity,
    pen: &Penalty,
    alpha0: f64,
    q: f64,
    j_max: usize,
    opts: &SolveOptions,
) -> std::result::Result<Vec<AlphaPathRecord>, PathFailure> {
    let fail = |records, source| PathFailure { records, source };
    if !(alpha0 > 0.0 && alpha0.is_finite()) {
        return Err(fail(vec![], Error::InvalidArgument(format!("alpha0 must be positive, got {alpha0}"))));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(fail(vec![], Error::InvalidArgument(format!("q must lie in (0, 1), got {q}"))));
    }
    let mut records: Vec<AlphaPathRecord> = Vec::with_capacity(j_max + 1);
    let mut start = opts.init.clone().unwrap_or_else(|| GridFunction::zeros(model.x_grid()));
    for (j, alpha) in alpha_grid(alpha0, q, j_max).into_iter().enumerate() {
        let rec = match minimize(model, fid, pen, alpha, j, start, opts) {
            Ok(rec) => rec,
            Err(e) => return Err(fail(records, e)),
        };
        start = rec.x.clone();
        let stop = alpha < MIN_ALPHA || rec.residual.powf(fid.r()) <= MIN_RESIDUAL_POWER;
        log::debug!(
            "j={j} alpha={alpha:.4e} residual={:.4e} theta={:.4e} iters={} converged={}",
            rec.residual,
            rec.theta,
            rec.iters,
            rec.converged
        );
        records.push(rec);
        if stop {
            break;
        }
    }
    Ok(records)
}
