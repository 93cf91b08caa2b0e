//! log Γ, log sin(πz) and the functional-equation factor χ(s).

use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

use super::bernoulli::bernoulli_over_factorial;

const LN_PI: f64 = 1.144_729_885_849_400_2;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_TERMS: usize = 14;
/// Stirling is applied once |z| reaches this radius.
const STIRLING_RADIUS: f64 = 10.0;

fn stirling_coefficients() -> &'static [f64; STIRLING_TERMS] {
    use std::sync::OnceLock;
    static C: OnceLock<[f64; STIRLING_TERMS]> = OnceLock::new();
    C.get_or_init(|| {
        let mut c = [0.0; STIRLING_TERMS];
        for (i, slot) in c.iter_mut().enumerate() {
            let j = i + 1;
            // B_{2j} / (2j (2j-1)) = (B_{2j}/(2j)!) (2j-2)!
            let fact: f64 = (1..=(2 * j - 2)).map(|v| v as f64).product();
            *slot = bernoulli_over_factorial(j) * fact;
        }
        c
    })
}

fn stirling(z: Complex64) -> Complex64 {
    let c = stirling_coefficients();
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for &cj in c.iter() {
        series += p * cj;
        p *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series
}

/// log Γ(z).
///
/// For `Re z ≥ 1/2` the branch is the one continuous from the positive real
/// axis; left of that the reflection formula is used and the imaginary part
/// is only defined modulo 2π.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return Complex64::new(LN_PI, 0.0) - ln_sin_pi(z) - ln_gamma(1.0 - z);
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < STIRLING_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

/// `sin(π x)` for real `x`, exact zeros at integers.
fn sin_pi_real(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    let (sign, r) = if r < 0.0 { (-1.0, -r) } else { (1.0, r) };
    let v = if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else {
        (PI * (1.0 - r)).sin()
    };
    sign * v
}

fn cos_pi_real(x: f64) -> f64 {
    sin_pi_real(x + 0.5)
}

/// log sin(πz), stable for large |Im z|. The imaginary part is a branch
/// continuous in each half-plane |Im z| ≥ 1.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im <= -1.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    if z.im < 1.0 {
        let (x, y) = (z.re, z.im);
        let s = Complex64::new(
            sin_pi_real(x) * (PI * y).cosh(),
            cos_pi_real(x) * (PI * y).sinh(),
        );
        return s.ln();
    }
    // sin w = (i/2) e^{-iw} (1 - e^{2iw}),  w = πz,  |e^{2iw}| = e^{-2π Im z}.
    let w = z * PI;
    let e2 = Complex64::from_polar((-2.0 * PI * z.im).exp(), 2.0 * PI * (z.re - 2.0 * (z.re / 2.0).round()) );
    let tail = Complex64::new(1.0, 0.0) - e2;
    Complex64::new(-LN_2, PI / 2.0) - Complex64::i() * w + tail.ln()
}

/// log χ(s) where χ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s), so that ζ(s) = χ(s) ζ(1-s).
pub fn ln_chi(s: Complex64) -> Complex64 {
    s * LN_2 + (s - 1.0) * LN_PI + ln_sin_pi(s * 0.5) + ln_gamma(1.0 - s)
}

pub fn chi(s: Complex64) -> Complex64 {
    // The sine factor vanishes exactly at the even non-positive integers.
    if s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() && (s.re as i64) % 2 == 0 {
        return Complex64::new(0.0, 0.0);
    }
    ln_chi(s).exp()
}
