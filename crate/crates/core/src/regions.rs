//! Half-planes free of a-points and the trivial a-points near s = −2n.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};
use thiserror::Error;

use crate::evaluator::{zeta_jet, EvalConfig, EvalError};
use crate::rootscan::{self, shifted, Rect, ScanError, ScanWindow};

/// Direct terms of the majorant series before the integral tail takes over.
const MAJORANT_TERMS: u64 = 1 << 18;
/// Probe step in t for the left free abscissa.
const E1_GRID_STEP: f64 = 0.1;
/// Lower bound on the grid minimum of |ζ^(k)| required when a = 0.
const E1_ZERO_FLOOR: f64 = 1e-2;
/// Inward shrink of the trivial boxes.
const TRIVIAL_SHRINK: f64 = 1e-3;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RegionError {
    #[error("winding number {winding} around the trivial box n = {n}")]
    WindingNotOne { n: u32, winding: i64 },
    #[error("Newton iteration left the trivial box n = {n}")]
    NewtonDiverged { n: u32 },
    #[error("no left free abscissa found down to {floor}")]
    NoLeftAbscissa { floor: f64 },
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionBounds {
    pub k: u32,
    pub a_re: f64,
    pub a_im: f64,
    pub e1: f64,
    pub e2: f64,
    pub e1_strict: f64,
    pub e2_strict: f64,
    /// Grid minimum of |ζ^(k)| on the line σ = e1 (empirical, not a proof).
    pub e1_witness: f64,
    /// Height up to which the left abscissa was probed.
    pub t_max: f64,
}

impl RegionBounds {
    pub fn compute(k: u32, a: Complex64, t_max: f64, cfg: &EvalConfig) -> Result<Self, RegionError> {
        let e2 = if a.norm() == 0.0 { find_e2_zero(k) } else { find_e2(k, a) };
        let (e1, e1_witness) = find_e1_with_witness(k, a, t_max, cfg)?;
        Ok(RegionBounds {
            k,
            a_re: a.re,
            a_im: a.im,
            e1,
            e2,
            e1_strict: e1.min(-1.0),
            e2_strict: e2,
            e1_witness,
            t_max,
        })
    }

    pub fn a(&self) -> Complex64 {
        Complex64::new(self.a_re, self.a_im)
    }

    /// Scan abscissas: the free abscissas widened by `margin`.
    pub fn scan_sigma(&self, margin: f64) -> (f64, f64) {
        (self.e1_strict - margin, self.e2_strict + margin)
    }
}

/// ∫_N^∞ (log x)^k x^{-σ} dx for σ > 1, via the incomplete gamma function.
fn log_power_tail(k: u32, sigma: f64, n: f64) -> f64 {
    let c = sigma - 1.0;
    let l = n.ln();
    let mut term = 1.0 / c; // k!/(j! c^{k-j+1}) L^j built from j = k down
    let mut sum = 0.0;
    let mut lp = l.powi(k as i32);
    for j in (0..=k).rev() {
        sum += term * lp;
        if j > 0 {
            term *= j as f64 / c;
            lp /= l;
        }
    }
    sum * (-c * l).exp()
}

/// Upper bound for Σ_{n ≥ start} (log n)^k n^{-σ}: direct terms plus an
/// integral tail (the summand decreases past e^{k/σ}).
fn log_power_majorant(k: u32, sigma: f64, start: u64) -> f64 {
    if sigma <= 1.0 {
        return f64::INFINITY;
    }
    let mut s = 0.0;
    for n in (start..MAJORANT_TERMS).rev() {
        let l = (n as f64).ln();
        s += l.powi(k as i32) * (-sigma * l).exp();
    }
    s + log_power_tail(k, sigma, (MAJORANT_TERMS - 1) as f64)
}

fn half_integer_search(mut ok: impl FnMut(f64) -> bool) -> f64 {
    let mut sigma = 1.0;
    while !ok(sigma) {
        sigma += 0.5;
    }
    sigma
}

/// Smallest half-integer σ* ≥ 1 with Σ_{n≥2} (log n)^k n^{-σ*} < |a|; no
/// a-point has real part ≥ σ*.
pub fn find_e2(k: u32, a: Complex64) -> f64 {
    let target = a.norm();
    half_integer_search(|s| log_power_majorant(k, s, 2) < target)
}

/// a = 0: smallest half-integer σ* ≥ 1 where the 2^{-s} term dominates,
/// Σ_{n≥3} (log n / log 2)^k (2/n)^{σ*} < 1.
pub fn find_e2_zero(k: u32) -> f64 {
    half_integer_search(|s| {
        let scale = (s * LN_2).exp() / LN_2.powi(k as i32);
        scale * log_power_majorant(k, s, 3) < 1.0
    })
}

/// Largest half-integer σ* ≤ −1 with min |ζ^(k)(σ* + it)| > 2|a| on the grid
/// t ∈ [1, t_max] with step 0.1 (empirical).
pub fn find_e1(k: u32, a: Complex64, t_max: f64, cfg: &EvalConfig) -> Result<f64, RegionError> {
    Ok(find_e1_with_witness(k, a, t_max, cfg)?.0)
}

fn find_e1_with_witness(
    k: u32,
    a: Complex64,
    t_max: f64,
    cfg: &EvalConfig,
) -> Result<(f64, f64), RegionError> {
    let need = (2.0 * a.norm()).max(if a.norm() == 0.0 { E1_ZERO_FLOOR } else { 0.0 });
    let floor = -60.0;
    let steps = ((t_max.max(1.0) - 1.0) / E1_GRID_STEP).ceil() as usize;
    let mut sigma = -1.0;
    while sigma >= floor {
        let mut min = f64::INFINITY;
        for i in 0..=steps {
            let t = (1.0 + i as f64 * E1_GRID_STEP).min(t_max.max(1.0));
            let jet = zeta_jet(Complex64::new(sigma, t), k as usize, cfg)?;
            min = min.min(jet.derivative(k as usize).norm());
            if min <= need {
                break;
            }
        }
        if min > need {
            return Ok((sigma, min));
        }
        sigma -= 0.5;
    }
    Err(RegionError::NoLeftAbscissa { floor })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrivialRoot {
    pub beta: f64,
    pub gamma: f64,
    /// Size of the final Newton correction |f/f'|.
    pub newton_residual: f64,
    /// |ζ^(k)(ρ) − a| at the returned point.
    pub abs_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrivialBox {
    pub n: u32,
    /// (−2n−1, −2n+1) × (−1, 1), shrunk inward.
    pub rect: Rect,
    pub winding: i64,
    pub root: Option<TrivialRoot>,
}

pub fn trivial_rect(n: u32) -> Rect {
    let c = -2.0 * n as f64;
    Rect::new(
        c - 1.0 + TRIVIAL_SHRINK,
        c + 1.0 - TRIVIAL_SHRINK,
        -1.0 + TRIVIAL_SHRINK,
        1.0 - TRIVIAL_SHRINK,
    )
}

/// The single a-point in the box around −2n, located by Newton from −2n.
pub fn trivial_apoint(k: u32, a: Complex64, n: u32, cfg: &EvalConfig) -> Result<TrivialBox, RegionError> {
    assert!(n >= 2, "trivial boxes start at n = 2");
    let rect = trivial_rect(n);
    let w = rootscan::winding(k, a, rect, PI / 3.0, cfg)?;
    if w != 1 {
        return Err(RegionError::WindingNotOne { n, winding: w });
    }
    let root = match newton_in_box(k, a, rect, Complex64::new(-2.0 * n as f64, 0.0), cfg)? {
        Some(r) => r,
        None => {
            let window = ScanWindow::new(u64::from(n), rect.t_lo, rect.t_hi, rect.sigma_lo, rect.sigma_hi);
            let pts = rootscan::isolate(k, a, &window, cfg)?;
            let p = pts.first().ok_or(RegionError::NewtonDiverged { n })?;
            newton_in_box(k, a, rect, p.rho(), cfg)?.ok_or(RegionError::NewtonDiverged { n })?
        }
    };
    let (f, df) = shifted(k, a, root, cfg)?;
    let newton_residual = (f / df).norm();
    Ok(TrivialBox {
        n,
        rect,
        winding: w,
        root: Some(TrivialRoot {
            beta: root.re,
            gamma: root.im,
            newton_residual,
            abs_residual: f.norm(),
        }),
    })
}

/// Newton iteration confined to `rect`; returns the most settled iterate.
fn newton_in_box(
    k: u32,
    a: Complex64,
    rect: Rect,
    s0: Complex64,
    cfg: &EvalConfig,
) -> Result<Option<Complex64>, RegionError> {
    let mut s = s0;
    let mut best: Option<(f64, Complex64)> = None;
    for _ in 0..60 {
        let (f, df) = shifted(k, a, s, cfg)?;
        let d = f / df;
        let next = s - d;
        if !rect.contains_strictly(next) {
            return Ok(None);
        }
        let step = d.norm();
        s = next;
        if best.map_or(true, |(b, _)| step < b) {
            best = Some((step, s));
        }
        if step <= 4.0 * f64::EPSILON * s.norm() {
            break;
        }
    }
    Ok(best.map(|(_, r)| r))
}

/// Smallest n such that every box n, n+1, …, `start` has winding number 1,
/// searching downward from `start`.
pub fn find_n_min(k: u32, a: Complex64, start: u32, cfg: &EvalConfig) -> Result<u32, RegionError> {
    let mut n_min = None;
    let mut n = start;
    while n >= 2 {
        let rect = trivial_rect(n);
        match rootscan::winding(k, a, rect, PI / 3.0, cfg) {
            Ok(1) => n_min = Some(n),
            Ok(_) | Err(ScanError::BoundaryRoot { .. }) => break,
            Err(e) => return Err(e.into()),
        }
        n -= 1;
    }
    n_min.ok_or(RegionError::WindingNotOne { n: start, winding: 0 })
}
