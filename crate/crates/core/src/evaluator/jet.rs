//! Taylor jets of ζ: the coefficients of ζ(s+h) = Σ c_m h^m up to a fixed order.
//!
//! Right of the reflection line the jet comes from differentiating each
//! Euler–Maclaurin term in h. Left of it ζ(s+h) = χ(s+h) ζ(1-s-h): the χ
//! jet is read off a trapezoidal Cauchy circle and multiplied into the
//! reflected Euler–Maclaurin jet.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::bernoulli::bernoulli_over_factorial;
use super::dirichlet::{ln_n, partial_sum_jet};
use super::gamma::chi;
use super::{finite, EvalConfig, EvalError};

type C64 = Complex64;

/// Truncated Taylor coefficients of ζ around a point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub center: C64,
    pub coeffs: Vec<C64>,
}

impl Jet {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// ζ^(m)(center) = m! c_m.
    pub fn derivative(&self, m: usize) -> C64 {
        let fact: f64 = (1..=m).map(|v| v as f64).product();
        self.coeffs[m] * fact
    }

    /// Evaluates the truncated Taylor polynomial at `center + h`.
    pub fn eval_offset(&self, h: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * h + c)
    }
}

pub(crate) fn mul_trunc(a: &[C64], b: &[C64], order: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); order + 1];
    for (i, &ai) in a.iter().enumerate().take(order + 1) {
        for (j, &bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Multiplies the jet `p` in place by the linear jet `(c + h)`.
fn mul_linear(p: &mut [C64], c: C64) {
    for m in (0..p.len()).rev() {
        let lower = if m > 0 { p[m - 1] } else { C64::new(0.0, 0.0) };
        p[m] = p[m] * c + lower;
    }
}

/// Number of Dirichlet terms so that the Bernoulli tail ratio
/// |s + 2M| / (2πN) is small enough for `em_terms` corrections.
pub(crate) fn em_length(s: C64, em_terms: usize) -> usize {
    let x = (1e-16f64).powf(1.0 / (2.0 * em_terms as f64 - 1.0));
    let need = (s.norm() + 2.0 * em_terms as f64) / (2.0 * PI * x);
    (need.ceil() as usize).max(20)
}

/// Euler–Maclaurin jet of ζ at `s` (intended for Re s ≥ 1/2).
/// Returns the coefficients and the size of the last Bernoulli correction.
pub(crate) fn em_jet(s: C64, order: usize, cfg: &EvalConfig) -> (Vec<C64>, f64) {
    let m_terms = cfg.em_terms;
    let n = em_length(s, m_terms);
    let nf = n as f64;
    let ln_big_n = ln_n(n);

    let mut out = partial_sum_jet(s, n, order, cfg.precision);

    // E(h) = N^{-s-h}
    let n_pow = (-s * ln_big_n).exp();
    let mut e = Vec::with_capacity(order + 1);
    let mut c = n_pow;
    for m in 0..=order {
        if m > 0 {
            c = c * (-ln_big_n) / m as f64;
        }
        e.push(c);
    }

    // 1/(s - 1 + h)
    let inv = (s - 1.0).inv();
    let mut r = Vec::with_capacity(order + 1);
    let mut c = inv;
    for _ in 0..=order {
        r.push(c);
        c = -c * inv;
    }

    // Σ_j B_{2j}/(2j)! N^{1-2j} (s+h)_{2j-1}
    let mut poch = vec![C64::new(0.0, 0.0); order + 1];
    poch[0] = s;
    if order >= 1 {
        poch[1] = C64::new(1.0, 0.0);
    }
    let mut a = vec![C64::new(0.0, 0.0); order + 1];
    let inv_n2 = 1.0 / (nf * nf);
    let mut n_scale = 1.0 / nf; // N^{1-2j} at j = 1
    let mut last = 0.0;
    for j in 1..=m_terms {
        let b = bernoulli_over_factorial(j) * n_scale;
        for (am, pm) in a.iter_mut().zip(poch.iter()) {
            *am += *pm * b;
        }
        last = (poch[0] * b).norm();
        mul_linear(&mut poch, s + (2 * j - 1) as f64);
        mul_linear(&mut poch, s + (2 * j) as f64);
        n_scale *= inv_n2;
    }

    let integral = mul_trunc(&e, &r, order);
    let corr = mul_trunc(&e, &a, order);
    for m in 0..=order {
        out[m] += integral[m] * nf + e[m] * 0.5 + corr[m];
    }
    (out, last * n_pow.norm())
}

const CHI_NODES: usize = 32;

/// Taylor jet of χ at `s` from a trapezoidal Cauchy circle. The radius stays
/// below a quarter of the distance to the pole at s = 1 so the aliasing
/// error is below 4^{-32}.
pub(crate) fn chi_jet(s: C64, order: usize) -> Result<Vec<C64>, EvalError> {
    let q = CHI_NODES;
    let radius = 0.5f64.min((s - 1.0).norm() / 4.0);
    let values: Vec<C64> = (0..q)
        .map(|j| {
            let w = C64::from_polar(1.0, 2.0 * PI * j as f64 / q as f64);
            chi(s + w * radius)
        })
        .collect();
    let mut out = Vec::with_capacity(order + 1);
    let mut rpow = 1.0;
    for m in 0..=order {
        let mut acc = C64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let w = C64::from_polar(1.0, -2.0 * PI * ((j * m) % q) as f64 / q as f64);
            acc += v * w;
        }
        out.push(acc / (q as f64 * rpow));
        rpow *= radius;
    }
    for v in &out {
        finite(*v, s)?;
    }
    Ok(out)
}

/// ζ(s), ζ'(s)/1!, …, ζ^(order)(s)/order! packed as a [`Jet`].
///
/// Uses Euler–Maclaurin for Re s ≥ 1/2 and the reflected jet below.
pub fn zeta_jet(s: C64, order: usize, cfg: &EvalConfig) -> Result<Jet, EvalError> {
    if (s - 1.0).norm() < 10.0 * f64::EPSILON {
        return Err(EvalError::PoleAtOne(s));
    }
    let coeffs = if super::zeta::use_euler_maclaurin(s) {
        em_jet(s, order, cfg).0
    } else {
        let chi_c = chi_jet(s, order)?;
        let (mut z, _) = em_jet(1.0 - s, order, cfg);
        for (m, c) in z.iter_mut().enumerate() {
            if m % 2 == 1 {
                *c = -*c;
            }
        }
        mul_trunc(&chi_c, &z, order)
    };
    for c in &coeffs {
        finite(*c, s)?;
    }
    Ok(Jet { center: s, coeffs })
}
