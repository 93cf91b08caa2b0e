use num_complex::Complex64;
use std::f64::consts::PI;

use super::jet::em_jet;
use super::zeta::zeta;
use super::{finite, EvalConfig, EvalError};

/// Right of this abscissa the differentiated Dirichlet series is returned.
const SERIES_ABSCISSA: f64 = 2.0;

/// Trapezoidal approximation of (k!/2πi)∮ ζ(z)/(z-s)^{k+1} dz from node
/// values, using every `stride`-th node.
fn trapezoid(k: usize, radius: f64, values: &[Complex64], stride: usize) -> Complex64 {
    let q = values.len() / stride;
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, v) in values.iter().step_by(stride).enumerate() {
        let phase = -2.0 * PI * ((idx * k) % q) as f64 / q as f64;
        acc += v * Complex64::from_polar(1.0, phase);
    }
    let kfact: f64 = (1..=k).map(|v| v as f64).product();
    acc * (kfact / (q as f64 * radius.powi(k as i32)))
}

/// ζ^(k)(s) from Cauchy's integral formula on the circle |z - s| = r.
///
/// The quadrature is run with `circle_nodes` and `2·circle_nodes` points;
/// disagreement beyond `target_rel_err` is reported as [`EvalError::PrecisionLoss`].
/// For Re s ≥ 2 the result is cross-checked against the differentiated
/// Dirichlet series Σ (-log n)^k n^{-s}, whose value is returned.
pub fn zeta_deriv(k: usize, s: Complex64, cfg: &EvalConfig) -> Result<Complex64, EvalError> {
    cfg.validate()?;
    let dist = (s - 1.0).norm();
    if dist < 10.0 * f64::EPSILON {
        return Err(EvalError::PoleAtOne(s));
    }
    let radius = cfg.circle_radius.unwrap_or_else(|| 0.5f64.min(dist / 2.0));
    if radius >= dist {
        return Err(EvalError::CircleHitsPole { center: s, radius });
    }

    let q2 = 2 * cfg.circle_nodes;
    let mut values = Vec::with_capacity(q2);
    let mut max_abs: f64 = 0.0;
    for j in 0..q2 {
        let z = s + Complex64::from_polar(radius, 2.0 * PI * j as f64 / q2 as f64);
        let v = zeta(z, cfg)?;
        max_abs = max_abs.max(v.norm());
        values.push(v);
    }
    let fine = trapezoid(k, radius, &values, 1);
    let coarse = trapezoid(k, radius, &values, 2);
    let kfact: f64 = (1..=k).map(|v| v as f64).product();
    // Roundoff floor of the quadrature itself.
    let floor = 64.0 * f64::EPSILON * kfact * max_abs / radius.powi(k as i32);
    let diff = (fine - coarse).norm();
    if diff > cfg.target_rel_err * fine.norm() + floor {
        return Err(EvalError::PrecisionLoss {
            at: s,
            estimate: diff / fine.norm().max(f64::MIN_POSITIVE),
        });
    }
    let fine = finite(fine, s)?;

    if s.re >= SERIES_ABSCISSA {
        let (jet, _) = em_jet(s, k, cfg);
        let series = jet[k] * kfact;
        let gap = (series - fine).norm();
        if gap > 1e3 * (cfg.target_rel_err * series.norm() + floor) {
            return Err(EvalError::PrecisionLoss {
                at: s,
                estimate: gap / series.norm().max(f64::MIN_POSITIVE),
            });
        }
        return finite(series, s);
    }
    Ok(fine)
}
