use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index_fn::IndexFunction;
use crate::noise::NoiseSpec;
use crate::solver::SolveOptions;

use super::functions::FunctionSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Example1,
    Example2Smooth,
    Example2Piecewise,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelSpec {
    /// Linear integral operator with the Green's-function kernel, `n` nodes.
    Fredholm { n: usize },
    /// `-u'' + c u = f`, `u(0) = g0`, `u(1) = g1` on `subintervals` cells.
    Elliptic { subintervals: usize, g0: f64, g1: f64, source: FunctionSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PenaltyKindSpec {
    Quadratic,
    ShiftedQuadratic { reference: FunctionSpec },
    SmoothedTv { epsilon: f64, mu: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltySpec {
    /// File-name-safe identifier of this penalty's outputs.
    pub label: String,
    #[serde(flatten)]
    pub kind: PenaltyKindSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuleSpec {
    HankeRaus,
    /// Discrepancy principle with the realized noise level, one selection per `tau`.
    Discrepancy { taus: Vec<f64> },
}

/// One experiment: model, truth, noise, penalties, parameter grid and rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub model: ModelSpec,
    pub truth: FunctionSpec,
    /// Exponent of the L^r data fidelity.
    pub r: f64,
    pub penalties: Vec<PenaltySpec>,
    pub rules: Vec<RuleSpec>,
    pub alpha0: f64,
    pub q: f64,
    pub j_max: usize,
    pub noise: NoiseSpec,
    #[serde(default)]
    pub solver: SolveOptions,
    /// Starting point of the first solve on the path.
    #[serde(default = "default_init")]
    pub init: FunctionSpec,
    /// Index function of a known variational source condition. Derived
    /// automatically for constructed-source truths when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_condition: Option<IndexFunction>,
    pub output_dir: PathBuf,
    /// Settings that are implementation choices rather than published constants.
    #[serde(default)]
    pub not_from_paper: Vec<String>,
}

fn default_init() -> FunctionSpec {
    FunctionSpec::Zero
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(vec![e.to_string()]))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(vec![format!("cannot read {}: {e}", path.display())]))?;
        Self::from_json(&text)
    }

    /// Every problem with the configuration, collected before any compute.
    pub fn validation_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let y_len = match &self.model {
            ModelSpec::Fredholm { n } => {
                if *n < 3 {
                    errs.push(format!("model.n must be at least 3, got {n}"));
                }
                *n
            }
            ModelSpec::Elliptic { subintervals, g0, g1, source } => {
                if *subintervals < 4 {
                    errs.push(format!("model.subintervals must be at least 4, got {subintervals}"));
                }
                if !(g0.is_finite() && g1.is_finite()) {
                    errs.push("model boundary values must be finite".into());
                }
                errs.extend(source.validate("model.source"));
                subintervals.saturating_sub(1)
            }
        };
        errs.extend(self.truth.validate("truth"));
        errs.extend(self.init.validate("init"));
        if matches!(self.truth, FunctionSpec::ConstructedSource { .. })
            && !matches!(self.model, ModelSpec::Fredholm { .. })
        {
            errs.push("truth: constructed_source requires the fredholm model".into());
        }
        if !(self.r > 1.0 && self.r.is_finite()) {
            errs.push(format!("r must exceed 1, got {}", self.r));
        }
        if self.penalties.is_empty() {
            errs.push("at least one penalty is required".into());
        }
        let mut labels = std::collections::BTreeSet::new();
        for p in &self.penalties {
            if p.label.is_empty()
                || !p.label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                errs.push(format!("penalty label {:?} must be non-empty [A-Za-z0-9_-]", p.label));
            }
            if !labels.insert(p.label.as_str()) {
                errs.push(format!("duplicate penalty label {:?}", p.label));
            }
            match &p.kind {
                PenaltyKindSpec::Quadratic => {}
                PenaltyKindSpec::ShiftedQuadratic { reference } => {
                    errs.extend(reference.validate(&format!("penalty {} reference", p.label)))
                }
                PenaltyKindSpec::SmoothedTv { epsilon, mu } => {
                    if !(*epsilon > 0.0 && epsilon.is_finite()) {
                        errs.push(format!("penalty {}: epsilon must be positive", p.label));
                    }
                    if !(*mu >= 0.0 && mu.is_finite()) {
                        errs.push(format!("penalty {}: mu must be nonnegative", p.label));
                    }
                }
            }
        }
        for rule in &self.rules {
            if let RuleSpec::Discrepancy { taus } = rule {
                if taus.is_empty() {
                    errs.push("discrepancy rule needs at least one tau".into());
                }
                if taus.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
                    errs.push("discrepancy taus must be positive".into());
                }
            }
        }
        if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
            errs.push(format!("alpha0 must be positive, got {}", self.alpha0));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            errs.push(format!("q must lie in (0, 1), got {}", self.q));
        }
        errs.extend(self.noise.validate(y_len.max(1)).into_iter().map(|e| format!("noise: {e}")));
        errs.extend(self.solver.validate().into_iter().map(|e| format!("solver: {e}")));
        if let Some(phi) = &self.source_condition {
            if let Err(e) = phi.validate() {
                errs.push(format!("source_condition: {e}"));
            }
        }
        errs
    }

    pub fn validate(&self) -> Result<()> {
        let errs = self.validation_errors();
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errs))
        }
    }
}
