use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// A closed-form function of `t` used for truths, sources and references.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Zero,
    Constant { value: f64 },
    /// `slope t + intercept`
    Linear { slope: f64, intercept: f64 },
    /// `amplitude exp(-width (t - center)²)`
    GaussianBump { amplitude: f64, center: f64, width: f64 },
    /// `amplitude sin(frequency pi t)`
    Sine { amplitude: f64, frequency: f64 },
    /// `4t(1-t) + sin(2 pi t)`
    Example1Truth,
    /// `sin(pi t) + sin(4 pi t) + 2t³(1-t) + t`
    Example2SmoothTruth,
    /// `values[k]` on `[breakpoints[k-1], breakpoints[k])`.
    PiecewiseConstant { breakpoints: Vec<f64>, values: Vec<f64> },
    /// The truth `K w` of the linear integral model, for a given `w`; only
    /// meaningful as a truth of the Fredholm model.
    ConstructedSource { w: Box<FunctionSpec> },
}

impl FunctionSpec {
    /// Pointwise value; `ConstructedSource` evaluates its `w`.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            FunctionSpec::Zero => 0.0,
            FunctionSpec::Constant { value } => *value,
            FunctionSpec::Linear { slope, intercept } => slope * t + intercept,
            FunctionSpec::GaussianBump { amplitude, center, width } => {
                amplitude * (-width * (t - center).powi(2)).exp()
            }
            FunctionSpec::Sine { amplitude, frequency } => amplitude * (frequency * PI * t).sin(),
            FunctionSpec::Example1Truth => 4.0 * t * (1.0 - t) + (2.0 * PI * t).sin(),
            FunctionSpec::Example2SmoothTruth => {
                (PI * t).sin() + (4.0 * PI * t).sin() + 2.0 * t.powi(3) * (1.0 - t) + t
            }
            FunctionSpec::PiecewiseConstant { breakpoints, values } => {
                let k = breakpoints.iter().take_while(|&&b| t >= b).count();
                values[k.min(values.len() - 1)]
            }
            FunctionSpec::ConstructedSource { w } => w.eval(t),
        }
    }

    pub fn validate(&self, what: &str) -> Vec<String> {
        let mut errs = Vec::new();
        match self {
            FunctionSpec::PiecewiseConstant { breakpoints, values } => {
                if values.len() != breakpoints.len() + 1 {
                    errs.push(format!("{what}: piecewise_constant needs one more value than breakpoints"));
                }
                if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
                    errs.push(format!("{what}: breakpoints must increase"));
                }
            }
            FunctionSpec::ConstructedSource { w } => {
                if matches!(**w, FunctionSpec::ConstructedSource { .. }) {
                    errs.push(format!("{what}: nested constructed_source"));
                }
                errs.extend(w.validate(what));
            }
            _ => {}
        }
        let finite = match self {
            FunctionSpec::Constant { value } => value.is_finite(),
            FunctionSpec::Linear { slope, intercept } => slope.is_finite() && intercept.is_finite(),
            FunctionSpec::GaussianBump { amplitude, center, width } => {
                amplitude.is_finite() && center.is_finite() && width.is_finite()
            }
            FunctionSpec::Sine { amplitude, frequency } => amplitude.is_finite() && frequency.is_finite(),
            FunctionSpec::PiecewiseConstant { breakpoints, values } => {
                breakpoints.iter().chain(values).all(|v| v.is_finite())
            }
            _ => true,
        };
        if !finite {
            errs.push(format!("{what}: parameters must be finite"));
        }
        errs
    }
}
