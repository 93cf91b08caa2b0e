use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use super::winding::{IRect, Tracker};
use super::{shifted, sort_points, APoint, ScanError, ScanWindow};
use crate::evaluator::EvalConfig;

/// Half the side of a certification square; its diagonal stays below 1e-3.
pub(crate) const CERT_HALF_SIDE: f64 = 3.5e-4;

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_RESIDUAL_STOP: f64 = 1e-11;
const SPLIT_RETRIES: i64 = 12;

pub(crate) struct Newton {
    pub root: Complex64,
    pub residual: f64,
}

/// Newton iteration for ζ^(k)(s) = a from `s0`; `None` if it leaves the disc
/// of radius `reach` around `s0` or fails to converge.
pub(crate) fn newton(
    k: u32,
    a: Complex64,
    s0: Complex64,
    reach: f64,
    cfg: &EvalConfig,
) -> Result<Option<Newton>, ScanError> {
    let mut s = s0;
    let mut last_step = f64::INFINITY;
    for _ in 0..NEWTON_MAX_ITER {
        let (f, df) = shifted(k, a, s, cfg)?;
        if f.norm() < NEWTON_RESIDUAL_STOP || last_step <= 4.0 * f64::EPSILON * s.norm() {
            return Ok(Some(Newton { root: s, residual: f.norm() }));
        }
        if df.norm() == 0.0 {
            return Ok(None);
        }
        let step = f / df;
        s -= step;
        last_step = step.norm();
        if (s - s0).norm() > reach || !s.re.is_finite() || !s.im.is_finite() {
            return Ok(None);
        }
    }
    let (f, _) = shifted(k, a, s, cfg)?;
    if last_step <= 1e-12 * s.norm().max(1.0) {
        return Ok(Some(Newton { root: s, residual: f.norm() }));
    }
    Ok(None)
}

struct Locator<'a> {
    tr: Tracker<'a>,
    window: ScanWindow,
    points: Vec<APoint>,
}

impl<'a> Locator<'a> {
    fn record(&mut self, r: IRect, root: Complex64, residual: f64, multiplicity: u32) {
        self.points.push(APoint {
            k: self.tr.k,
            a_re: self.tr.a.re,
            a_im: self.tr.a.im,
            beta: root.re,
            gamma: root.im,
            residual,
            cert_box: self.tr.rect(r),
            window_id: self.window.id,
            multiplicity,
        });
    }

    fn center(&self, r: IRect) -> Complex64 {
        self.tr.point(((r.i0 + r.i1) / 2, (r.j0 + r.j1) / 2))
    }

    fn try_certify(&mut self, r: IRect) -> Result<bool, ScanError> {
        let phys = self.tr.rect(r);
        let reach = phys.diameter();
        let Some(n) = newton(self.tr.k, self.tr.a, self.center(r), reach, self.tr.cfg)? else {
            return Ok(false);
        };
        if !phys.contains_strictly(n.root) {
            return Ok(false);
        }
        if phys.diameter() <= 1e-3 {
            self.record(r, n.root, n.residual, 1);
            return Ok(true);
        }
        let (ci, cj) = self.tr.lattice(n.root);
        let hi = ((CERT_HALF_SIDE / self.tr.dsig) as u64).max(1);
        let hj = ((CERT_HALF_SIDE / self.tr.dt) as u64).max(1);
        let cert = IRect {
            i0: ci.saturating_sub(hi).max(r.i0),
            i1: (ci + hi).min(r.i1),
            j0: cj.saturating_sub(hj).max(r.j0),
            j1: (cj + hj).min(r.j1),
        };
        if cert.i0 >= cert.i1 || cert.j0 >= cert.j1 {
            return Ok(false);
        }
        match self.tr.winding(cert) {
            Ok(1) => {
                self.record(cert, n.root, n.residual, 1);
                Ok(true)
            }
            Ok(_) | Err(ScanError::BoundaryRoot { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Splits `r` across its longer side, shifting the cut off any root it hits.
    fn split(&mut self, r: IRect, w: i64) -> Result<[(IRect, i64); 2], ScanError> {
        let horizontal = (r.i1 - r.i0) as f64 * self.tr.dsig >= (r.j1 - r.j0) as f64 * self.tr.dt;
        let (lo, hi, unit) = if horizontal {
            (r.i0, r.i1, self.tr.dsig)
        } else {
            (r.j0, r.j1, self.tr.dt)
        };
        let mid = (lo + hi) / 2;
        let offset = ((FRAC_1_SQRT_2 * 1e-6 / unit).round() as i64).max(1);
        let mut last_err = None;
        for attempt in 0..=SPLIT_RETRIES {
            let m = if attempt == 0 {
                0
            } else if attempt % 2 == 1 {
                (attempt + 1) / 2
            } else {
                -(attempt / 2)
            };
            let cut = mid as i64 + m * offset;
            if cut <= lo as i64 || cut >= hi as i64 {
                continue;
            }
            let cut = cut as u64;
            let (a, b) = if horizontal {
                (IRect { i1: cut, ..r }, IRect { i0: cut, ..r })
            } else {
                (IRect { j1: cut, ..r }, IRect { j0: cut, ..r })
            };
            let wa = match self.tr.winding(a) {
                Ok(v) => v,
                Err(e @ ScanError::BoundaryRoot { .. }) => {
                    last_err = Some(e);
                    continue;
                }
                Err(e) => return Err(e),
            };
            let wb = match self.tr.winding(b) {
                Ok(v) => v,
                Err(e @ ScanError::BoundaryRoot { .. }) => {
                    last_err = Some(e);
                    continue;
                }
                Err(e) => return Err(e),
            };
            if wa + wb != w || wa < 0 || wb < 0 {
                return Err(ScanError::Unresolved {
                    rect: self.tr.rect(r),
                    reason: format!("winding {w} split into {wa} + {wb}"),
                });
            }
            return Ok([(a, wa), (b, wb)]);
        }
        Err(last_err.unwrap_or(ScanError::Unresolved {
            rect: self.tr.rect(r),
            reason: "box too small to split".into(),
        }))
    }

    fn solve(&mut self, r: IRect, w: i64, depth: u32) -> Result<(), ScanError> {
        if w == 0 {
            return Ok(());
        }
        if w < 0 {
            return Err(ScanError::Unresolved {
                rect: self.tr.rect(r),
                reason: format!("negative winding {w}"),
            });
        }
        if w == 1 && self.try_certify(r)? {
            return Ok(());
        }
        if depth >= self.window.max_depth {
            let c = self.center(r);
            let (f, _) = shifted(self.tr.k, self.tr.a, c, self.tr.cfg)?;
            if w >= 2 || self.tr.rect(r).diameter() <= 1e-3 {
                self.record(r, c, f.norm(), w as u32);
                return Ok(());
            }
            return Err(ScanError::Unresolved {
                rect: self.tr.rect(r),
                reason: "Newton failed at maximum depth".into(),
            });
        }
        for (child, wc) in self.split(r, w)? {
            self.solve(child, wc, depth + 1)?;
        }
        Ok(())
    }
}

/// All solutions of ζ^(k)(s) = a in the window, sorted by height then abscissa.
/// Each carries a certification box of diameter ≤ 1e-3 with winding number 1
/// (or its multiplicity for unresolved clusters at maximum depth).
pub fn locate(
    k: u32,
    a: Complex64,
    window: &ScanWindow,
    cfg: &EvalConfig,
) -> Result<Vec<APoint>, ScanError> {
    window.validate()?;
    if window.t_hi == window.t_lo {
        return Ok(Vec::new());
    }
    isolate(k, a, window, cfg)
}

/// Subdivision driver behind [`locate`], without the window-placement checks.
pub(crate) fn isolate(
    k: u32,
    a: Complex64,
    window: &ScanWindow,
    cfg: &EvalConfig,
) -> Result<Vec<APoint>, ScanError> {
    let mut loc = Locator {
        tr: Tracker::new(k, a, window.rect(), window.phase_step_cap, cfg),
        window: *window,
        points: Vec::new(),
    };
    let full = loc.tr.full();
    let w = loc.tr.winding(full)?;
    loc.solve(full, w, 0)?;
    let mut points = loc.points;
    sort_points(&mut points);
    Ok(points)
}
