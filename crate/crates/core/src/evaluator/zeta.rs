use num_complex::Complex64;

use super::gamma::chi;
use super::jet::em_jet;
use super::{finite, EvalConfig, EvalError};

/// Euler–Maclaurin is used right of the reflection line and in a small disc
/// around s = 0, where χ(s) ζ(1-s) is a 0·∞ product.
pub(crate) fn use_euler_maclaurin(s: Complex64) -> bool {
    s.re >= 0.5 || s.norm() < 0.5
}

/// ζ(s) by Euler–Maclaurin for Re s ≥ 1/2 and by ζ(s) = χ(s) ζ(1-s) below.
pub fn zeta(s: Complex64, cfg: &EvalConfig) -> Result<Complex64, EvalError> {
    if (s - 1.0).norm() < 10.0 * f64::EPSILON {
        return Err(EvalError::PoleAtOne(s));
    }
    if use_euler_maclaurin(s) {
        let (c, last) = em_jet(s, 0, cfg);
        let value = finite(c[0], s)?;
        let scale = value.norm().max((-s.re * super::dirichlet::ln_n(20)).exp());
        if last > cfg.target_rel_err * scale {
            return Err(EvalError::PrecisionLoss { at: s, estimate: last / scale });
        }
        Ok(value)
    } else {
        let reflected = zeta(1.0 - s, cfg)?;
        finite(chi(s) * reflected, s)
    }
}
