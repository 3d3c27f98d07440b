use serde::{Deserialize, Serialize};

use crate::avoid::AvoidError;
use crate::math::{binomial, ln_big, log2_big};

/// `k` independent copies of the game on universe `[t]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AvoidInstance {
    pub t: u64,
    pub a: u64,
    pub b: u64,
    pub k: u64,
    pub delta: f64,
}

impl AvoidInstance {
    pub fn new(t: u64, a: u64, b: u64, k: u64, delta: f64) -> Result<Self, AvoidError> {
        let inst = AvoidInstance { t, a, b, k, delta };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), AvoidError> {
        if self.t == 0 {
            return Err(AvoidError::Invalid("universe must be nonempty"));
        }
        if self.a + self.b > self.t {
            return Err(AvoidError::Invalid("a + b must not exceed t"));
        }
        if self.k == 0 {
            return Err(AvoidError::Invalid("k must be positive"));
        }
        if !(self.delta >= 0.0 && self.delta < 1.0) {
            return Err(AvoidError::Invalid("delta must lie in [0, 1)"));
        }
        Ok(())
    }
}

/// `log₂ C(t,a) − log₂ C(t−b,a)`.
fn log2_ratio(t: u64, a: u64, b: u64) -> f64 {
    log2_big(&binomial(t, a)) - log2_big(&binomial(t - b, a))
}

/// Communication lower bound in bits. `exact` uses the binomial ratio;
/// otherwise the relaxation `k·a·b / (t ln 2)`, which never exceeds it.
pub fn avoid_lower_bound(inst: &AvoidInstance, exact: bool) -> f64 {
    let base = libm::log2(1.0 - inst.delta);
    let per = if exact {
        log2_ratio(inst.t, inst.a, inst.b)
    } else {
        (inst.a * inst.b) as f64 / (inst.t as f64 * core::f64::consts::LN_2)
    };
    base + inst.k as f64 * per
}

/// `z = ⌈(C(t,a)/C(t−b,a))·ln C(t,a)⌉`, at least 1.
pub fn covering_size(t: u64, a: u64, b: u64) -> u64 {
    let big = binomial(t, a);
    let ln = ln_big(&big);
    if ln <= 0.0 {
        return 1;
    }
    let z = libm::exp2(log2_ratio(t, a, b)) * ln;
    (libm::ceil(z - 1e-9 * z) as u64).max(1)
}

/// Deterministic message length bound:
/// `log₂(C(t,a)/C(t−b,a)) + log₂ ln C(t,a) + 2`.
pub fn message_bound(t: u64, a: u64, b: u64) -> f64 {
    log2_ratio(t, a, b) + libm::log2(ln_big(&binomial(t, a))) + 2.0
}
