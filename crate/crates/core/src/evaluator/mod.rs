//! Numerical kernel: ζ(s), χ(s), log Γ(s) and the derivatives ζ^(k)(s).
//!
//! Two routes to ζ^(k) are provided. [`zeta_deriv`] integrates ζ around a
//! circle with the trapezoidal rule (Cauchy's formula) and checks itself by
//! node doubling. [`zeta_jet`] returns the whole Taylor jet
//! ζ(s), ζ'(s), …, ζ^(m)(s) in one pass by differentiating the
//! Euler–Maclaurin formula term by term; it is the hot path used by the
//! root scanner. The two are cross-checked in the tests.

mod asymptotic;
mod bernoulli;
mod cauchy;
mod dd;
mod dirichlet;
mod gamma;
mod jet;
mod zeta;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use asymptotic::{left_asymptotic, GrowthEnvelope};
pub use bernoulli::bernoulli_over_factorial;
pub use cauchy::zeta_deriv;
pub use dd::CompensatedSum;
pub use gamma::{chi, ln_chi, ln_gamma, ln_sin_pi};
pub use jet::{zeta_jet, Jet};
pub use zeta::zeta;

/// Complex coordinate `s = σ + it`.
pub type ComplexValue = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionMode {
    /// Native `f64` throughout.
    #[default]
    Standard,
    /// Dirichlet partial sums accumulated with error-free transformations.
    Compensated,
}

impl PrecisionMode {
    /// Reads `ZAP_PRECISION` (`standard` | `compensated`); unset means standard.
    pub fn from_env() -> Result<Self, EvalError> {
        match std::env::var("ZAP_PRECISION") {
            Err(_) => Ok(PrecisionMode::Standard),
            Ok(v) => v.parse(),
        }
    }
}

impl std::str::FromStr for PrecisionMode {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "standard" | "" => Ok(PrecisionMode::Standard),
            "compensated" => Ok(PrecisionMode::Compensated),
            other => Err(EvalError::InvalidConfig(format!(
                "unknown precision mode {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub precision: PrecisionMode,
    /// Number of Bernoulli correction terms in Euler–Maclaurin.
    pub em_terms: usize,
    /// Cauchy circle radius; `None` selects `min(0.5, |s-1|/2)`.
    pub circle_radius: Option<f64>,
    /// Trapezoid nodes on the Cauchy circle (power of two, at least 16).
    pub circle_nodes: usize,
    pub target_rel_err: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            precision: PrecisionMode::Standard,
            em_terms: 24,
            circle_radius: None,
            circle_nodes: 64,
            target_rel_err: 1e-12,
        }
    }
}

impl EvalConfig {
    pub fn with_precision(mut self, precision: PrecisionMode) -> Self {
        self.precision = precision;
        self
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if self.em_terms == 0 || self.em_terms > bernoulli::MAX_TERMS {
            return Err(EvalError::InvalidConfig(format!(
                "em_terms must be in 1..={}",
                bernoulli::MAX_TERMS
            )));
        }
        if self.circle_nodes < 16 || !self.circle_nodes.is_power_of_two() {
            return Err(EvalError::InvalidConfig(
                "circle_nodes must be a power of two >= 16".into(),
            ));
        }
        if let Some(r) = self.circle_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(EvalError::InvalidConfig("circle_radius must be positive".into()));
            }
        }
        if !(self.target_rel_err > 0.0) {
            return Err(EvalError::InvalidConfig("target_rel_err must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("evaluation point {0} is at the pole s = 1")]
    PoleAtOne(Complex64),
    #[error("Cauchy circle of radius {radius} around {center} encloses the pole s = 1")]
    CircleHitsPole { center: Complex64, radius: f64 },
    #[error("precision loss at {at}: estimated error {estimate:e} exceeds target")]
    PrecisionLoss { at: Complex64, estimate: f64 },
    #[error("non-finite result at {0}")]
    Overflow(Complex64),
    #[error("{at} is outside the region of validity: {reason}")]
    OutOfRegion { at: Complex64, reason: &'static str },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub(crate) fn finite(z: Complex64, at: Complex64) -> Result<Complex64, EvalError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(EvalError::Overflow(at))
    }
}
