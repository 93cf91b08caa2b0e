use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{locate, shifted, APoint, ScanError, ScanWindow};
use crate::evaluator::EvalConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripReport {
    pub t: f64,
    /// a-points with T < γ ≤ T + 1, with multiplicity.
    pub count: u32,
    /// `count / log T`.
    pub ratio: f64,
}

/// Counts the a-points in the unit strip above height `t` by a direct scan
/// of `[sigma_lo, sigma_hi] × [t, t+1]`.
pub fn strip_count_check(
    k: u32,
    a: Complex64,
    t: f64,
    sigma_lo: f64,
    sigma_hi: f64,
    cfg: &EvalConfig,
) -> Result<StripReport, ScanError> {
    if t < 2.0 {
        return Err(ScanError::InvalidWindow(format!("strip height {t} below 2")));
    }
    // Nudge the horizontal edges off any root they pass through.
    let nudge = std::f64::consts::FRAC_1_SQRT_2 * 1e-6;
    let mut last = None;
    for m in 0..8 {
        let lo = t + m as f64 * nudge;
        let hi = t + 1.0 + m as f64 * nudge;
        let w = ScanWindow::new(0, lo, hi, sigma_lo, sigma_hi);
        match locate(k, a, &w, cfg) {
            Ok(pts) => {
                let count: u32 = pts.iter().map(|p| p.multiplicity).sum();
                return Ok(StripReport { t, count, ratio: count as f64 / t.ln() });
            }
            Err(e @ ScanError::BoundaryRoot { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// ζ^(k+1)(s)/(ζ^(k)(s) − a) − Σ_{|γ−t|<1} 1/(s − ρ) over the given points.
pub fn local_expansion_residual(
    k: u32,
    a: Complex64,
    s: Complex64,
    points: &[APoint],
    cfg: &EvalConfig,
) -> Result<Complex64, ScanError> {
    let mut local = Complex64::new(0.0, 0.0);
    for p in points.iter().filter(|p| (p.gamma - s.im).abs() < 1.0) {
        let d = s - p.rho();
        if d.norm() < 1e-3 {
            return Err(ScanError::NearRoot { at: s, distance: d.norm() });
        }
        local += p.multiplicity as f64 / d;
    }
    let (f, df) = shifted(k, a, s, cfg)?;
    Ok(df / f - local)
}
