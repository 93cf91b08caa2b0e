//! Adaptive argument tracking on an integer lattice.
//!
//! Every window is mapped onto a 2^40 × 2^40 lattice so that shared edges of
//! sub-rectangles are sampled at bit-identical points; samples and segment
//! phase increments are cached per window.

use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;

use super::{shifted, Rect, ScanError};
use crate::evaluator::EvalConfig;

pub(crate) const UNITS: u64 = 1 << 40;

/// Segments are accepted when the step times |f'/f| at both ends stays below this.
pub(crate) const SLOPE_CAP: f64 = 0.5;

pub(crate) type Pt = (u64, u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct IRect {
    pub i0: u64,
    pub i1: u64,
    pub j0: u64,
    pub j1: u64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Node {
    pub f: Complex64,
    pub df: Complex64,
}

pub(crate) struct Tracker<'a> {
    pub k: u32,
    pub a: Complex64,
    pub cfg: &'a EvalConfig,
    pub phase_step_cap: f64,
    sigma0: f64,
    t0: f64,
    pub dsig: f64,
    pub dt: f64,
    nodes: HashMap<Pt, Node>,
    segments: HashMap<(Pt, Pt), f64>,
}

impl<'a> Tracker<'a> {
    pub fn new(k: u32, a: Complex64, rect: Rect, phase_step_cap: f64, cfg: &'a EvalConfig) -> Self {
        Tracker {
            k,
            a,
            cfg,
            phase_step_cap,
            sigma0: rect.sigma_lo,
            t0: rect.t_lo,
            dsig: (rect.sigma_hi - rect.sigma_lo) / UNITS as f64,
            dt: (rect.t_hi - rect.t_lo) / UNITS as f64,
            nodes: HashMap::new(),
            segments: HashMap::new(),
        }
    }

    pub fn full(&self) -> IRect {
        IRect { i0: 0, i1: UNITS, j0: 0, j1: UNITS }
    }

    pub fn point(&self, p: Pt) -> Complex64 {
        Complex64::new(self.sigma0 + p.0 as f64 * self.dsig, self.t0 + p.1 as f64 * self.dt)
    }

    pub fn rect(&self, r: IRect) -> Rect {
        let lo = self.point((r.i0, r.j0));
        let hi = self.point((r.i1, r.j1));
        Rect::new(lo.re, hi.re, lo.im, hi.im)
    }

    /// Nearest lattice point, clamped to the window.
    pub fn lattice(&self, s: Complex64) -> Pt {
        let clamp = |x: f64| x.round().clamp(0.0, UNITS as f64) as u64;
        (
            clamp((s.re - self.sigma0) / self.dsig),
            clamp((s.im - self.t0) / self.dt),
        )
    }

    pub fn node(&mut self, p: Pt) -> Result<Node, ScanError> {
        if let Some(n) = self.nodes.get(&p) {
            return Ok(*n);
        }
        let s = self.point(p);
        let (f, df) = shifted(self.k, self.a, s, self.cfg)?;
        if f == Complex64::new(0.0, 0.0) {
            return Err(ScanError::BoundaryRoot { at: s });
        }
        let n = Node { f, df };
        self.nodes.insert(p, n);
        Ok(n)
    }

    fn length(&self, p: Pt, q: Pt) -> f64 {
        let di = p.0.abs_diff(q.0) as f64 * self.dsig;
        let dj = p.1.abs_diff(q.1) as f64 * self.dt;
        di + dj
    }

    /// Increment of arg(ζ^(k) − a) from `p` to `q` along an axis-parallel segment.
    pub fn segment(&mut self, p: Pt, q: Pt) -> Result<f64, ScanError> {
        if p == q {
            return Ok(0.0);
        }
        let (key, sign) = if p < q { ((p, q), 1.0) } else { ((q, p), -1.0) };
        if let Some(d) = self.segments.get(&key) {
            return Ok(sign * d);
        }
        let d = self.track(key.0, key.1)?;
        self.segments.insert(key, d);
        Ok(sign * d)
    }

    fn track(&mut self, p: Pt, q: Pt) -> Result<f64, ScanError> {
        let np = self.node(p)?;
        let nq = self.node(q)?;
        let h = self.length(p, q);
        let d = (nq.f / np.f).arg();
        let slope = h * (np.df / np.f).norm().max((nq.df / nq.f).norm());
        if d.abs() < self.phase_step_cap && slope < SLOPE_CAP {
            return Ok(d);
        }
        let span = p.0.abs_diff(q.0) + p.1.abs_diff(q.1);
        if span <= 1 {
            let at = if np.f.norm() < nq.f.norm() { self.point(p) } else { self.point(q) };
            return Err(ScanError::BoundaryRoot { at });
        }
        let mid = ((p.0 + q.0) / 2, (p.1 + q.1) / 2);
        Ok(self.track(p, mid)? + self.track(mid, q)?)
    }

    /// Counterclockwise winding number around `r`.
    pub fn winding(&mut self, r: IRect) -> Result<i64, ScanError> {
        let c = [(r.i0, r.j0), (r.i1, r.j0), (r.i1, r.j1), (r.i0, r.j1)];
        let mut total = 0.0;
        for e in 0..4 {
            total += self.segment(c[e], c[(e + 1) % 4])?;
        }
        let w = total / (2.0 * PI);
        let n = w.round();
        if (w - n).abs() > 0.25 {
            return Err(ScanError::Unresolved {
                rect: self.rect(r),
                reason: format!("winding {w} is not near an integer"),
            });
        }
        Ok(n as i64)
    }
}

/// Number of solutions of ζ^(k)(s) = a inside `rect`, counted with multiplicity.
pub fn winding(
    k: u32,
    a: Complex64,
    rect: Rect,
    phase_step_cap: f64,
    cfg: &EvalConfig,
) -> Result<i64, ScanError> {
    if !(rect.sigma_hi > rect.sigma_lo && rect.t_hi > rect.t_lo) {
        return Ok(0);
    }
    let mut tr = Tracker::new(k, a, rect, phase_step_cap, cfg);
    let full = tr.full();
    tr.winding(full)
}

/// Change of arg(ζ^(k)(s) − a) along the horizontal segment from
/// `sigma_lo + it` to `sigma_hi + it`, sampled on the same lattice as a
/// window edge at height `t`; fails with `BoundaryRoot` if an a-point sits on it.
pub fn edge_phase(
    k: u32,
    a: Complex64,
    sigma_lo: f64,
    sigma_hi: f64,
    t: f64,
    phase_step_cap: f64,
    cfg: &EvalConfig,
) -> Result<f64, ScanError> {
    let mut tr = Tracker::new(k, a, Rect::new(sigma_lo, sigma_hi, t, t + 1.0), phase_step_cap, cfg);
    tr.segment((0, 0), (UNITS, 0))
}
