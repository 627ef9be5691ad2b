//! Index functions `phi` and the derived map `Phi(t) = t^r / phi(t)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Doubling budget when bracketing `Phi^{-1}(s)`.
pub const MAX_BRACKET_DOUBLINGS: usize = 1000;

/// A continuous, strictly increasing `phi: [0, inf) -> [0, inf)` with
/// `phi(0) = 0`. Concavity is the caller's responsibility.
pub trait IndexFn {
    fn eval(&self, t: f64) -> f64;
}

impl<F: Fn(f64) -> f64> IndexFn for F {
    fn eval(&self, t: f64) -> f64 {
        self(t)
    }
}

/// The shipped power-type index functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexFunction {
    /// `phi(t) = k t`
    Linear { k: f64 },
    /// `phi(t) = k t^theta`, `0 < theta <= 1`
    Power { k: f64, theta: f64 },
}

impl IndexFunction {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            IndexFunction::Linear { k } => k > 0.0 && k.is_finite(),
            IndexFunction::Power { k, theta } => {
                k > 0.0 && k.is_finite() && theta > 0.0 && theta <= 1.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("not a concave index function: {self:?}")))
        }
    }
}

impl IndexFn for IndexFunction {
    fn eval(&self, t: f64) -> f64 {
        match *self {
            IndexFunction::Linear { k } => k * t,
            IndexFunction::Power { k, theta } => k * t.powf(theta),
        }
    }
}

/// Checks `phi(0) = 0` and strict increase along `ladder` (sorted ascending).
pub fn is_index_on_ladder(phi: &impl IndexFn, ladder: &[f64]) -> bool {
    phi.eval(0.0) == 0.0 && ladder.windows(2).all(|w| phi.eval(w[0]) < phi.eval(w[1]))
}

/// `Phi(t) = t^r / phi(t)` for `t > 0`.
pub fn phi(ifn: &impl IndexFn, r: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("Phi is defined for t > 0, got {t}")));
    }
    Ok(t.powf(r) / ifn.eval(t))
}

/// Inverse of [`phi`] by geometric bracketing from `t = 1` and bisection.
pub fn phi_inverse(ifn: &impl IndexFn, r: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument(format!("Phi^-1 is defined for s > 0, got {s}")));
    }
    let big = |t: f64| t.powf(r) / ifn.eval(t);
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    let mut doublings = 0;
    if big(1.0) < s {
        while !(big(hi) >= s) {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > MAX_BRACKET_DOUBLINGS || !hi.is_finite() {
                return Err(Error::Unbounded(MAX_BRACKET_DOUBLINGS));
            }
        }
    } else {
        while !(big(lo) <= s) {
            hi = lo;
            lo *= 0.5;
            doublings += 1;
            if doublings > MAX_BRACKET_DOUBLINGS || lo == 0.0 {
                return Err(Error::Unbounded(MAX_BRACKET_DOUBLINGS));
            }
        }
    }
    let tol = 1e-10 * s;
    let mut best = if (big(lo) - s).abs() < (big(hi) - s).abs() { lo } else { hi };
    for _ in 0..2000 {
        if (big(best) - s).abs() <= tol {
            break;
        }
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        let v = big(mid);
        if v < s {
            lo = mid;
        } else {
            hi = mid;
        }
        best = mid;
    }
    Ok(best)
}
