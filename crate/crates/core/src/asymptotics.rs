//! Closed-form main terms for counts, exponential sums and abscissa sums
//! of a-points. All logarithms are natural.

use num_complex::Complex64;
use std::f64::consts::{E, LN_2, PI};
use thiserror::Error;

use crate::coefficients::{alpha_index, alpha_zero, CoeffIndex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("height {0} is at most e^e")]
    DomainTooSmall(f64),
    #[error("x = {0} must exceed 1")]
    IndexTooSmall(f64),
}

/// Observed statistic against its main term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainTermReport {
    pub observed: Complex64,
    pub predicted: Complex64,
    pub remainder: Complex64,
    pub normalizer: f64,
    /// |remainder| / normalizer.
    pub ratio: f64,
}

impl MainTermReport {
    pub fn new(observed: Complex64, predicted: Complex64, normalizer: f64) -> Self {
        let remainder = observed - predicted;
        MainTermReport { observed, predicted, remainder, normalizer, ratio: remainder.norm() / normalizer }
    }

    pub fn real(observed: f64, predicted: f64, normalizer: f64) -> Self {
        Self::new(Complex64::new(observed, 0.0), Complex64::new(predicted, 0.0), normalizer)
    }
}

fn is_zero(a: Complex64) -> bool {
    a.re == 0.0 && a.im == 0.0
}

/// Main term of the number of a-points with 1 < γ < T:
/// (T/2π) log(T/2π) − T/2π for a ≠ 0, (T/2π) log(T/4π) − T/2π for a = 0.
pub fn count_main(_k: u32, a: Complex64, t: f64) -> f64 {
    let x = t / (2.0 * PI);
    let scale = if is_zero(a) { 2.0 } else { 1.0 };
    x * (x / scale).ln() - x
}

/// Main term of the number of a-points with T < γ < T + U.
pub fn window_count_main(_k: u32, a: Complex64, t: f64, u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let c = if is_zero(a) { 4.0 * PI } else { 2.0 * PI };
    let tu = t + u;
    (tu * (tu / c).ln() - t * (t / c).ln() - u) / (2.0 * PI)
}

/// Main term (T/2π) α(x) of Σ_{1<γ<T} x^ρ.
pub fn expsum_main(k: u32, a: Complex64, x: &CoeffIndex, t: f64) -> Result<Complex64, AsymptoticsError> {
    if x.value() <= 1.0 {
        return Err(AsymptoticsError::IndexTooSmall(x.value()));
    }
    let alpha = if is_zero(a) { alpha_zero(k, x) } else { alpha_index(k, a, x) };
    Ok(alpha * (t / (2.0 * PI)))
}

/// Half-width (log log T)² / log T of the central band around σ = 1/2.
pub fn band_halfwidth(t: f64) -> Result<f64, AsymptoticsError> {
    if !(t > E.powf(E)) {
        return Err(AsymptoticsError::DomainTooSmall(t));
    }
    let l = t.ln();
    Ok(l.ln().powi(2) / l)
}

/// Main term of Σ_{T<γ<T+U} (β + b). For a ≠ 0:
/// [(1/2+b){(T+U)log((T+U)/2π) − T log(T/2π) − U} + k{(T+U)loglog(T+U) − T loglog T} − U log|a|] / 2π;
/// for a = 0 the −U inside the first brace and −U log|a| are replaced by
/// −U(1/2 + b + b log 2 + k loglog 2).
pub fn beta_sum_main(k: u32, a: Complex64, b: f64, t: f64, u: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    let tu = t + u;
    let c = 2.0 * PI;
    let logs = tu * (tu / c).ln() - t * (t / c).ln();
    let loglogs = tu * tu.ln().ln() - t * t.ln().ln();
    let kf = k as f64;
    let main = if is_zero(a) {
        (0.5 + b) * logs + kf * loglogs - u * (0.5 + b + b * LN_2 + kf * LN_2.ln())
    } else {
        (0.5 + b) * (logs - u) + kf * loglogs - u * a.norm().ln()
    };
    main / c
}
