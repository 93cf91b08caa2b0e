//! Partial Dirichlet sums Σ_{n<N} n^{-s} (-log n)^m / m!.
//!
//! Powers n^{-s} for composite n are assembled from the smallest prime
//! factor, n^{-s} = p^{-s} (n/p)^{-s}, so only prime n costs an `exp`.

use num_complex::Complex64;
use std::sync::OnceLock;

use super::dd::CompensatedSum;
use super::PrecisionMode;

const TABLE_LEN: usize = 1 << 17;

struct Tables {
    ln: Vec<f64>,
    spf: Vec<u32>,
}

fn tables() -> &'static Tables {
    static T: OnceLock<Tables> = OnceLock::new();
    T.get_or_init(|| {
        let mut spf = vec![0u32; TABLE_LEN];
        for i in 2..TABLE_LEN {
            if spf[i] == 0 {
                let mut j = i;
                while j < TABLE_LEN {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        let ln = (0..TABLE_LEN)
            .map(|n| if n == 0 { f64::NEG_INFINITY } else { (n as f64).ln() })
            .collect();
        Tables { ln, spf }
    })
}

#[inline]
pub(crate) fn ln_n(n: usize) -> f64 {
    if n < TABLE_LEN {
        tables().ln[n]
    } else {
        (n as f64).ln()
    }
}

/// n^{-s} for n = 0..len (entry 0 unused).
fn powers(s: Complex64, len: usize, direct: bool) -> Vec<Complex64> {
    let mut w = vec![Complex64::new(0.0, 0.0); len];
    if len > 1 {
        w[1] = Complex64::new(1.0, 0.0);
    }
    let neg_s = -s;
    if direct || len > TABLE_LEN {
        for (n, slot) in w.iter_mut().enumerate().skip(2) {
            *slot = (neg_s * ln_n(n)).exp();
        }
        return w;
    }
    let t = tables();
    for n in 2..len {
        let p = t.spf[n] as usize;
        w[n] = if p == n {
            (neg_s * t.ln[n]).exp()
        } else {
            w[p] * w[n / p]
        };
    }
    w
}

/// Taylor coefficients (in h) of Σ_{n=1}^{len-1} n^{-(s+h)}, orders `0..=order`.
pub(crate) fn partial_sum_jet(
    s: Complex64,
    len: usize,
    order: usize,
    mode: PrecisionMode,
) -> Vec<Complex64> {
    let compensated = mode == PrecisionMode::Compensated;
    let w = powers(s, len, compensated);
    // 1/m! folded in at the end.
    let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
    if compensated {
        let mut acc = vec![CompensatedSum::new(); order + 1];
        for n in (1..len).rev() {
            let l = -ln_n(n);
            let mut term = w[n];
            for a in acc.iter_mut() {
                a.add(term);
                term *= l;
            }
        }
        for (o, a) in out.iter_mut().zip(acc.iter()) {
            *o = a.value();
        }
    } else {
        // Smallest terms first.
        for n in (1..len).rev() {
            let l = -ln_n(n);
            let mut term = w[n];
            for o in out.iter_mut() {
                *o += term;
                term *= l;
            }
        }
    }
    let mut fact = 1.0;
    for (m, o) in out.iter_mut().enumerate() {
        if m > 1 {
            fact *= m as f64;
        }
        *o /= fact;
    }
    out
}
