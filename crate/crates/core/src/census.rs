//! Statistics of located a-points compared with their main terms.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use thiserror::Error;

use crate::asymptotics::{
    band_halfwidth, beta_sum_main, expsum_main, window_count_main, AsymptoticsError, MainTermReport,
};
use crate::coefficients::CoeffIndex;
use crate::evaluator::{zeta_jet, EvalConfig, EvalError};
use crate::quadrature::{integrate, QuadratureError};
use crate::rootscan::APoint;

/// Points with β this close to a band edge are listed as boundary hits.
pub const BAND_EDGE_TOL: f64 = 1e-12;
/// Below this value of |a − ζ^(k)(1/2 + iγ)| the integrand is treated as singular at γ.
const SINGULAR_LEVEL: f64 = 1e-6;
/// Half-width of the interval excised around a singular point.
const EXCISE_HALF: f64 = 5e-5;
const QUAD_TOL_PER_UNIT: f64 = 1e-9;
const QUAD_MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CensusError {
    #[error("quadrature refinement exceeded depth {depth} near t in [{lo}, {hi}]")]
    QuadratureStall { lo: f64, hi: f64, depth: u32 },
    #[error("a must be non-zero")]
    ZeroA,
    #[error(transparent)]
    Asymptotics(#[from] AsymptoticsError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl From<QuadratureError<EvalError>> for CensusError {
    fn from(e: QuadratureError<EvalError>) -> Self {
        match e {
            QuadratureError::Stall { lo, hi, depth } => CensusError::QuadratureStall { lo, hi, depth },
            QuadratureError::Integrand(e) => CensusError::Eval(e),
        }
    }
}

/// Band census of the a-points with T < γ < T + U.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub k: u32,
    pub a: Complex64,
    pub t: f64,
    pub u: f64,
    /// β > 1/2 + halfwidth.
    pub n1: u64,
    /// β < 1/2 − halfwidth.
    pub n2: u64,
    /// Closed central band.
    pub n3: u64,
    pub halfwidth: f64,
    pub total: u64,
    pub main_total: f64,
    /// |total − main_total| / log T.
    pub remainder_ratio: f64,
    /// (β, γ) of points within [`BAND_EDGE_TOL`] of a band edge (counted in n3).
    pub boundary: Vec<(f64, f64)>,
    /// 2π Σ_{β>1/2} (β − 1/2).
    pub beta_excess: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpSumReport {
    pub k: u32,
    pub a: Complex64,
    pub x: CoeffIndex,
    pub t: f64,
    pub observed: Complex64,
    pub predicted: Complex64,
    /// |observed − predicted| / log T.
    pub remainder_ratio: f64,
}

fn in_window(p: &APoint, lo: f64, hi: f64) -> bool {
    p.gamma > lo && p.gamma < hi
}

fn excess(points: &[APoint], t: f64, u: f64) -> f64 {
    2.0 * PI
        * points
            .iter()
            .filter(|p| in_window(p, t, t + u) && p.beta > 0.5)
            .map(|p| p.multiplicity as f64 * (p.beta - 0.5))
            .sum::<f64>()
}

pub fn census(k: u32, a: Complex64, t: f64, u: f64, points: &[APoint]) -> Result<CensusReport, CensusError> {
    let halfwidth = band_halfwidth(t)?;
    let (lo, hi) = (0.5 - halfwidth, 0.5 + halfwidth);
    let (mut n1, mut n2, mut n3) = (0, 0, 0);
    let mut boundary = Vec::new();
    for p in points.iter().filter(|p| in_window(p, t, t + u)) {
        let m = p.multiplicity as u64;
        if (p.beta - lo).abs() <= BAND_EDGE_TOL || (p.beta - hi).abs() <= BAND_EDGE_TOL {
            boundary.push((p.beta, p.gamma));
            n3 += m;
        } else if p.beta > hi {
            n1 += m;
        } else if p.beta < lo {
            n2 += m;
        } else {
            n3 += m;
        }
    }
    let total = n1 + n2 + n3;
    let main_total = window_count_main(k, a, t, u);
    Ok(CensusReport {
        k,
        a,
        t,
        u,
        n1,
        n2,
        n3,
        halfwidth,
        total,
        main_total,
        remainder_ratio: (total as f64 - main_total).abs() / t.ln(),
        boundary,
        beta_excess: excess(points, t, u),
    })
}

/// Σ_{1<γ<T} x^ρ against (T/2π) α(x).
pub fn expsum(k: u32, a: Complex64, x: &CoeffIndex, t: f64, points: &[APoint]) -> Result<ExpSumReport, CensusError> {
    let predicted = expsum_main(k, a, x, t)?;
    let lx = x.value().ln();
    let observed: Complex64 = points
        .iter()
        .filter(|p| in_window(p, 1.0, t))
        .map(|p| (p.rho() * lx).exp() * p.multiplicity as f64)
        .sum();
    Ok(ExpSumReport {
        k,
        a,
        x: *x,
        t,
        observed,
        predicted,
        remainder_ratio: (observed - predicted).norm() / t.ln(),
    })
}

/// ∫ log|d + iτ| dτ, antiderivative in τ.
fn log_abs_antiderivative(d: f64, tau: f64) -> f64 {
    let d = d.abs();
    let base = 0.5 * tau * (d * d + tau * tau).ln() - tau;
    if d == 0.0 {
        base
    } else {
        base + d * (tau / d).atan()
    }
}

/// ∫_T^{T+U} log|a − ζ^(k)(1/2 + it)| dt. Points whose value on the line is
/// below 1e-6 are excised over a width of 1e-4 and integrated from the
/// simple-zero model log|ζ^(k+1)(ρ)| + log|1/2 + it − ρ|.
pub fn line_log_integral(
    k: u32,
    a: Complex64,
    t: f64,
    u: f64,
    points: &[APoint],
    cfg: &EvalConfig,
) -> Result<f64, CensusError> {
    let f = |x: f64| -> Result<f64, EvalError> {
        let v = zeta_jet(Complex64::new(0.5, x), k as usize, cfg)?.derivative(k as usize);
        Ok((a - v).norm().ln())
    };
    let (lo, hi) = (t, t + u);
    let mut cuts: Vec<(f64, f64, f64)> = Vec::new();
    let mut analytic = 0.0;
    for p in points.iter().filter(|p| p.gamma > lo - EXCISE_HALF && p.gamma < hi + EXCISE_HALF) {
        let jet = zeta_jet(Complex64::new(0.5, p.gamma), k as usize, cfg)?;
        if (jet.derivative(k as usize) - a).norm() >= SINGULAR_LEVEL {
            continue;
        }
        let slope = zeta_jet(p.rho(), k as usize + 1, cfg)?.derivative(k as usize + 1).norm();
        let c0 = (p.gamma - EXCISE_HALF).max(lo);
        let c1 = (p.gamma + EXCISE_HALF).min(hi);
        if c1 <= c0 {
            continue;
        }
        let d = 0.5 - p.beta;
        analytic += (c1 - c0) * slope.ln() * p.multiplicity as f64
            + p.multiplicity as f64
                * (log_abs_antiderivative(d, c1 - p.gamma) - log_abs_antiderivative(d, c0 - p.gamma));
        cuts.push((c0, c1, p.gamma));
    }
    cuts.sort_by(|x, y| x.0.total_cmp(&y.0));

    // Panels of at most unit length between excised intervals.
    let mut panels = Vec::new();
    let mut start = lo;
    let push_range = |from: f64, to: f64, panels: &mut Vec<(f64, f64)>| {
        if to <= from {
            return;
        }
        let n = (to - from).ceil().max(1.0) as usize;
        for i in 0..n {
            let p0 = from + (to - from) * i as f64 / n as f64;
            let p1 = if i + 1 == n { to } else { from + (to - from) * (i + 1) as f64 / n as f64 };
            panels.push((p0, p1));
        }
    };
    for &(c0, c1, _) in &cuts {
        push_range(start, c0, &mut panels);
        start = start.max(c1);
    }
    push_range(start, hi, &mut panels);

    let parts: Vec<Result<f64, QuadratureError<EvalError>>> = panels
        .par_iter()
        .map(|&(p0, p1)| integrate(&f, p0, p1, QUAD_TOL_PER_UNIT, QUAD_MAX_DEPTH))
        .collect();
    let mut values = Vec::with_capacity(parts.len());
    for r in parts {
        values.push(r?);
    }
    Ok(pairwise_sum(&values) + analytic)
}

fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// 2π Σ_{β>1/2} (β − 1/2) against ∫ log|a − ζ^(k)(1/2+it)| dt − U log|a|,
/// normalized by log T.
pub fn littlewood_balance(
    k: u32,
    a: Complex64,
    t: f64,
    u: f64,
    points: &[APoint],
    cfg: &EvalConfig,
) -> Result<MainTermReport, CensusError> {
    if a.norm() == 0.0 {
        return Err(CensusError::ZeroA);
    }
    let integral = line_log_integral(k, a, t, u, points, cfg)?;
    let predicted = integral - u * a.norm().ln();
    Ok(MainTermReport::real(excess(points, t, u), predicted, t.ln()))
}

/// Σ_{T<γ<T+U} (β + b) against its main term, normalized by U / log T.
pub fn beta_sum_check(k: u32, a: Complex64, b: f64, t: f64, u: f64, points: &[APoint]) -> MainTermReport {
    let observed: f64 = points
        .iter()
        .filter(|p| in_window(p, t, t + u))
        .map(|p| p.multiplicity as f64 * (p.beta + b))
        .sum();
    let predicted = beta_sum_main(k, a, b, t, u);
    if u == 0.0 {
        return MainTermReport::real(observed, predicted, 1.0);
    }
    MainTermReport::real(observed, predicted, u / t.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antiderivative_matches_quadrature() {
        for d in [0.0, 1e-3, 0.2] {
            let g = |x: f64| -> Result<f64, ()> { Ok(0.5 * (d * d + x * x).ln()) };
            let q = integrate(&g, 0.01, 0.3, 1e-12, 40).unwrap();
            let exact = log_abs_antiderivative(d, 0.3) - log_abs_antiderivative(d, 0.01);
            assert!((q - exact).abs() < 1e-11, "d={d}");
        }
    }

    #[test]
    fn pairwise_sum_is_exact_on_small_integers() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 5050.0);
    }
}
