//! Parameter choice on a computed path: the Hanke-Raus heuristic rule and the
//! discrepancy principle baseline.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::AlphaPathRecord;

/// Default factor for the small-`delta_*` monitor.
pub const DEFAULT_DELTA_STAR_FACTOR: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    HankeRaus,
    Discrepancy { tau: f64, delta: f64 },
}

impl Rule {
    pub fn label(&self) -> String {
        match self {
            Rule::HankeRaus => "hanke_raus".into(),
            Rule::Discrepancy { tau, .. } => format!("discrepancy_tau={tau}"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RuleFlags {
    /// Discrepancy: no grid value met `residual <= tau delta`.
    pub no_qualifying_alpha: bool,
    /// `delta_*` is suspiciously small relative to the small-alpha residuals.
    pub delta_star_small: bool,
}

/// A selected regularization parameter together with the path it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleOutcome {
    pub rule: Rule,
    pub alpha_star: f64,
    /// Position of the selected record in `path`.
    pub index: usize,
    /// `residual` of the selected record.
    pub delta_star: f64,
    pub flags: RuleFlags,
    pub path: Vec<AlphaPathRecord>,
}

impl RuleOutcome {
    pub fn record(&self) -> &AlphaPathRecord {
        &self.path[self.index]
    }
}

/// Hanke-Raus choice: the record with the smallest `theta = residual^r / alpha`.
/// Ties go to the larger `alpha`, independent of list order.
pub fn hanke_raus_select(path: &[AlphaPathRecord]) -> Result<RuleOutcome> {
    let index = hanke_raus_index(path)?;
    let mut outcome = outcome(Rule::HankeRaus, path, index);
    outcome.flags.delta_star_small = delta_star_small(path, outcome.delta_star, DEFAULT_DELTA_STAR_FACTOR);
    Ok(outcome)
}

/// Index of the Hanke-Raus choice within `path`.
pub fn hanke_raus_index(path: &[AlphaPathRecord]) -> Result<usize> {
    path.iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| match a.theta.total_cmp(&b.theta) {
            Ordering::Equal => b.alpha.total_cmp(&a.alpha),
            o => o,
        })
        .map(|(i, _)| i)
        .ok_or(Error::EmptyPath)
}

/// Largest grid `alpha` with `residual <= tau delta`; when none qualifies the
/// smallest-`alpha` record is returned with `no_qualifying_alpha` set.
pub fn discrepancy_select(path: &[AlphaPathRecord], tau: f64, delta: f64) -> Result<RuleOutcome> {
    if path.is_empty() {
        return Err(Error::EmptyPath);
    }
    if !(tau > 0.0) || !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!("need tau > 0 and delta >= 0, got {tau}, {delta}")));
    }
    let mut order: Vec<usize> = (0..path.len()).collect();
    order.sort_by(|&a, &b| path[b].alpha.total_cmp(&path[a].alpha));
    let bound = tau * delta;
    let rule = Rule::Discrepancy { tau, delta };
    match order.iter().find(|&&i| path[i].residual <= bound) {
        Some(&i) => Ok(outcome(rule, path, i)),
        None => {
            let mut o = outcome(rule, path, *order.last().unwrap());
            o.flags.no_qualifying_alpha = true;
            Ok(o)
        }
    }
}

/// Monitor for a too-small `delta_*`: true when it falls below `factor` times
/// the median residual over the smallest-alpha quarter of the path.
pub fn delta_star_small(path: &[AlphaPathRecord], delta_star: f64, factor: f64) -> bool {
    if path.is_empty() {
        return false;
    }
    let mut by_alpha: Vec<&AlphaPathRecord> = path.iter().collect();
    by_alpha.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    let tail = by_alpha.len().div_ceil(4);
    let mut res: Vec<f64> = by_alpha[..tail].iter().map(|r| r.residual).collect();
    res.sort_by(f64::total_cmp);
    let median = if tail % 2 == 1 { res[tail / 2] } else { 0.5 * (res[tail / 2 - 1] + res[tail / 2]) };
    delta_star < factor * median
}

fn outcome(rule: Rule, path: &[AlphaPathRecord], index: usize) -> RuleOutcome {
    let rec = &path[index];
    RuleOutcome {
        rule,
        alpha_star: rec.alpha,
        index,
        delta_star: rec.residual,
        flags: RuleFlags::default(),
        path: path.to_vec(),
    }
}
