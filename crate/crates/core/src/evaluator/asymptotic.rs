use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

use super::gamma::{ln_gamma, ln_sin_pi};
use super::zeta::zeta;
use super::{finite, EvalConfig, EvalError};

/// Leading term of ζ^(k)(1-s) for Re s > 1, |Im s| ≥ 1:
/// (-1)^k 2 (2π)^{-s} Γ(s) (log s)^k cos(πs/2) ζ(s).
///
/// Only the leading term; the relative error decays like 1/|log s| with a
/// sizeable constant, so this is a cross-check, never an evaluator.
pub fn left_asymptotic(k: usize, s: Complex64) -> Result<Complex64, EvalError> {
    if k == 0 {
        return Err(EvalError::OutOfRegion { at: s, reason: "k must be positive" });
    }
    if !(s.re > 1.0) {
        return Err(EvalError::OutOfRegion { at: s, reason: "requires Re s > 1" });
    }
    if s.im.abs() < 1.0 {
        return Err(EvalError::OutOfRegion { at: s, reason: "requires |Im s| >= 1" });
    }
    let ln_two_pi = (2.0 * PI).ln();
    let log_part = LN_2 - s * ln_two_pi + ln_gamma(s) + ln_sin_pi((s + 1.0) * 0.5);
    let zeta_s = zeta(s, &EvalConfig::default())?;
    let logs = s.ln().powu(k as u32);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    finite(log_part.exp() * logs * zeta_s * sign, s)
}

/// Convex majorant μ̄(σ) of the growth exponent μ(σ) in ζ(σ+it) ≪ |t|^{μ(σ)+ε}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthEnvelope {
    pub slack: f64,
}

impl Default for GrowthEnvelope {
    fn default() -> Self {
        GrowthEnvelope { slack: 0.1 }
    }
}

impl GrowthEnvelope {
    pub fn mu_bar(&self, sigma: f64) -> f64 {
        if sigma >= 1.0 {
            0.0
        } else if sigma > 0.0 {
            0.5 - sigma / 2.0
        } else {
            0.5 - sigma
        }
    }

    /// `|t|^{μ̄(σ) + slack}`.
    pub fn bound(&self, sigma: f64, t: f64) -> f64 {
        t.abs().powf(self.mu_bar(sigma) + self.slack)
    }
}
