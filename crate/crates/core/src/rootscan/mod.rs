//! Certified location of the a-points of ζ^(k).
//!
//! The number of solutions of ζ^(k)(s) = a inside a rectangle is the winding
//! number of ζ^(k)(s) − a around its boundary. [`winding`] tracks the
//! argument adaptively; [`locate`] subdivides a window until each root sits
//! in its own box, refines it by Newton's method and certifies a small box
//! around it with winding number one.

mod diagnostics;
mod locate;
mod winding;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

use crate::evaluator::{zeta_jet, EvalConfig, EvalError};

pub use diagnostics::{local_expansion_residual, strip_count_check, StripReport};
pub use locate::locate;
pub(crate) use locate::isolate;
pub use winding::{edge_phase, winding};

/// Axis-aligned rectangle `[sigma_lo, sigma_hi] × [t_lo, t_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Rect {
    pub fn new(sigma_lo: f64, sigma_hi: f64, t_lo: f64, t_hi: f64) -> Self {
        Rect { sigma_lo, sigma_hi, t_lo, t_hi }
    }

    pub fn diameter(&self) -> f64 {
        (self.sigma_hi - self.sigma_lo).hypot(self.t_hi - self.t_lo)
    }

    pub fn contains_strictly(&self, s: Complex64) -> bool {
        s.re > self.sigma_lo && s.re < self.sigma_hi && s.im > self.t_lo && s.im < self.t_hi
    }
}

/// A certified root of ζ^(k)(s) = a.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct APoint {
    pub k: u32,
    pub a_re: f64,
    pub a_im: f64,
    pub beta: f64,
    pub gamma: f64,
    /// |ζ^(k)(β+iγ) − a| after refinement.
    pub residual: f64,
    #[serde(rename = "box")]
    pub cert_box: Rect,
    pub window_id: u64,
    /// Winding number of `cert_box`; above one only for unresolved clusters.
    #[serde(default = "one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

impl APoint {
    pub fn rho(&self) -> Complex64 {
        Complex64::new(self.beta, self.gamma)
    }
}

/// Height window scanned as one unit of work.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanWindow {
    pub id: u64,
    pub t_lo: f64,
    pub t_hi: f64,
    pub sigma_lo: f64,
    pub sigma_hi: f64,
    pub max_depth: u32,
    pub phase_step_cap: f64,
}

impl ScanWindow {
    pub fn new(id: u64, t_lo: f64, t_hi: f64, sigma_lo: f64, sigma_hi: f64) -> Self {
        ScanWindow {
            id,
            t_lo,
            t_hi,
            sigma_lo,
            sigma_hi,
            max_depth: 40,
            phase_step_cap: PI / 3.0,
        }
    }

    pub fn rect(&self) -> Rect {
        Rect::new(self.sigma_lo, self.sigma_hi, self.t_lo, self.t_hi)
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        let ok = self.t_hi >= self.t_lo
            && self.sigma_lo < 0.5
            && self.sigma_hi > 0.5
            && self.phase_step_cap > 0.0
            && self.phase_step_cap <= PI / 2.0
            && self.max_depth > 0;
        if ok && self.t_lo.is_finite() && self.t_hi.is_finite() {
            Ok(())
        } else {
            Err(ScanError::InvalidWindow(format!("{self:?}")))
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScanError {
    #[error("a-point on or next to the contour near {at}")]
    BoundaryRoot { at: Complex64 },
    #[error("argument tracking unresolved in {rect:?}: {reason}")]
    Unresolved { rect: Rect, reason: String },
    #[error("{at} lies within {distance:e} of an a-point")]
    NearRoot { at: Complex64, distance: f64 },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `(ζ^(k)(s) − a, ζ^(k+1)(s))`.
pub fn shifted(k: u32, a: Complex64, s: Complex64, cfg: &EvalConfig) -> Result<(Complex64, Complex64), EvalError> {
    let jet = zeta_jet(s, k as usize + 1, cfg)?;
    Ok((jet.derivative(k as usize) - a, jet.derivative(k as usize + 1)))
}

/// Orders points by height, then abscissa.
pub fn sort_points(points: &mut [APoint]) {
    points.sort_by(|x, y| {
        x.gamma
            .total_cmp(&y.gamma)
            .then(x.beta.total_cmp(&y.beta))
            .then(x.window_id.cmp(&y.window_id))
    });
}
