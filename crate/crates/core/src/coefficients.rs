//! Main-term coefficients α(x) of Σ x^ρ over a-points.
//!
//! For a ≠ 0, α(x) is the coefficient of x^{-s} in ζ^(k+1)(s)/(ζ^(k)(s) − a),
//! a sum over ordered factorizations x = n₀⋯n_l with n_i ≥ 2. For a = 0 the
//! series is led by 2^{-s} and the indices are dyadic rationals
//! x = n₀⋯n_l / 2^{l+1} with n₀ ≥ 2 and n₁, …, n_l ≥ 3.
//!
//! [`alpha`] and [`alpha_zero`] enumerate factorizations; [`alpha_oracle`]
//! performs formal long division of the Dirichlet series and serves as an
//! independent check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::LN_2;

/// Dyadic rational `numerator / 2^log2_denominator` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoeffIndex {
    pub numerator: u64,
    pub log2_denominator: u32,
}

impl CoeffIndex {
    pub fn new(numerator: u64, log2_denominator: u32) -> Self {
        assert!(numerator > 0, "index must be positive");
        let mut n = numerator;
        let mut d = log2_denominator;
        while d > 0 && n % 2 == 0 {
            n /= 2;
            d -= 1;
        }
        CoeffIndex { numerator: n, log2_denominator: d }
    }

    pub fn integer(n: u64) -> Self {
        CoeffIndex::new(n, 0)
    }

    /// Exact dyadic representation of `x`, if it has one with a modest denominator.
    pub fn from_f64(x: f64) -> Option<Self> {
        if !(x > 0.0) || !x.is_finite() {
            return None;
        }
        for d in 0..=52u32 {
            let scaled = x * (1u64 << d) as f64;
            if scaled > u64::MAX as f64 / 2.0 {
                return None;
            }
            if scaled.fract() == 0.0 {
                return Some(CoeffIndex::new(scaled as u64, d));
            }
        }
        None
    }

    pub fn value(&self) -> f64 {
        self.numerator as f64 / (1u64 << self.log2_denominator) as f64
    }

    pub fn is_integer(&self) -> bool {
        self.log2_denominator == 0
    }

    fn odd_exp(&self) -> (u64, i64) {
        let tz = self.numerator.trailing_zeros();
        (self.numerator >> tz, tz as i64 - self.log2_denominator as i64)
    }

    fn from_odd_exp(odd: u64, exp: i64) -> Self {
        if exp >= 0 {
            CoeffIndex::new(odd << exp, 0)
        } else {
            CoeffIndex::new(odd, (-exp) as u32)
        }
    }
}

impl std::fmt::Display for CoeffIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.log2_denominator == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, 1u64 << self.log2_denominator)
        }
    }
}

impl Ord for CoeffIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        let l = self.numerator as u128 * (1u128 << other.log2_denominator);
        let r = other.numerator as u128 * (1u128 << self.log2_denominator);
        l.cmp(&r)
    }
}

impl PartialOrd for CoeffIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub k: u32,
    pub a_re: f64,
    pub a_im: f64,
    /// Every index with numerator ≤ cutoff is present (zeros included for a ≠ 0).
    pub cutoff: u64,
    pub entries: BTreeMap<CoeffIndex, Complex64>,
}

impl CoefficientTable {
    pub fn get(&self, x: &CoeffIndex) -> Complex64 {
        self.entries.get(x).copied().unwrap_or_default()
    }
}

fn ln(n: u64) -> f64 {
    (n as f64).ln()
}

fn divisors_from(x: u64, min: u64) -> impl Iterator<Item = u64> {
    (min..=x).filter(move |d| x % d == 0)
}

/// Σ over ordered factorizations of `r` into factors ≥ `min` of Π weight(n_i),
/// with `len` factors when given, any number otherwise.
fn chains(
    r: u64,
    min: u64,
    len: Option<u32>,
    weight: &dyn Fn(u64) -> Complex64,
    memo: &mut HashMap<(u64, Option<u32>), Complex64>,
) -> Complex64 {
    if r == 1 {
        return match len {
            None | Some(0) => Complex64::new(1.0, 0.0),
            Some(_) => Complex64::new(0.0, 0.0),
        };
    }
    if len == Some(0) {
        return Complex64::new(0.0, 0.0);
    }
    if let Some(v) = memo.get(&(r, len)) {
        return *v;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for d in divisors_from(r, min) {
        acc += weight(d) * chains(r / d, min, len.map(|l| l - 1), weight, memo);
    }
    memo.insert((r, len), acc);
    acc
}

/// α(x) for a ≠ 0 and integer x ≥ 2:
/// Σ_{x = n₀⋯n_l, n_i ≥ 2} (−1)^{k(l+1)} a^{−(l+1)} (log n₀)^{k+1} Π_{i≥1} (log n_i)^k.
pub fn alpha(k: u32, a: Complex64, x: u64) -> Complex64 {
    assert!(a.norm() > 0.0, "alpha needs a != 0");
    if x < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let inv_a = a.inv();
    let link = move |n: u64| inv_a * (sign * ln(n).powi(k as i32));
    let mut memo = HashMap::new();
    let mut acc = Complex64::new(0.0, 0.0);
    for n0 in divisors_from(x, 2) {
        let head = inv_a * (sign * ln(n0).powi(k as i32 + 1));
        acc += head * chains(x / n0, 2, None, &link, &mut memo);
    }
    acc
}

/// α at a dyadic index for a ≠ 0; zero off the integers.
pub fn alpha_index(k: u32, a: Complex64, x: &CoeffIndex) -> Complex64 {
    if x.is_integer() {
        alpha(k, a, x.numerator)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// α(x) for a = 0:
/// Σ_{x = n₀⋯n_l/2^{l+1}, n₀ ≥ 2, n_i ≥ 3} (−1/(log 2)^k)^{l+1} (log n₀)^{k+1} Π_{i≥1} (log n_i)^k.
pub fn alpha_zero(k: u32, x: &CoeffIndex) -> Complex64 {
    alpha_zero_terms(k, x, false)
}

/// Σ of the absolute values of the terms of [`alpha_zero`]; the scale against
/// which cancellation in the coefficient is measured.
pub fn alpha_zero_magnitude(k: u32, x: &CoeffIndex) -> f64 {
    alpha_zero_terms(k, x, true).re
}

fn alpha_zero_terms(k: u32, x: &CoeffIndex, absolute: bool) -> Complex64 {
    let v = x.value();
    if v < 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    let c = if absolute { 1.0 } else { -1.0 } / LN_2.powi(k as i32);
    let link = move |n: u64| Complex64::new(c * ln(n).powi(k as i32), 0.0);
    let mut memo = HashMap::new();
    let mut acc = Complex64::new(0.0, 0.0);
    // n₀ ⋯ n_l = x 2^{l+1} ≥ 2·3^l bounds l.
    let l_max = (v.ln() / 1.5f64.ln()).floor() as u32;
    for l in 0..=l_max {
        let shift = l as i64 + 1 - x.log2_denominator as i64;
        if shift < 0 {
            continue;
        }
        let Some(p) = x.numerator.checked_shl(shift as u32).filter(|p| p >> shift == x.numerator) else {
            break;
        };
        for n0 in divisors_from(p, 2) {
            let head = c * ln(n0).powi(k as i32 + 1);
            acc += chains(p / n0, 3, Some(l), &link, &mut memo) * head;
        }
    }
    acc
}

/// Coefficient table by formal division of Dirichlet series, complete for
/// indices with numerator ≤ `cutoff`.
pub fn alpha_oracle(k: u32, a: Complex64, cutoff: u64) -> CoefficientTable {
    assert!(cutoff <= 10_000, "oracle cutoff is limited to 10^4");
    let entries = if a.norm() > 0.0 {
        oracle_nonzero(k, a, cutoff)
    } else {
        oracle_zero(k, cutoff)
    };
    CoefficientTable { k, a_re: a.re, a_im: a.im, cutoff, entries }
}

/// Q = N / D with D(1) = −a, D(n) = (−log n)^k and N(n) = (−log n)^{k+1}.
fn oracle_nonzero(k: u32, a: Complex64, cutoff: u64) -> BTreeMap<CoeffIndex, Complex64> {
    let m = cutoff as usize;
    let neg_pow = |n: usize, p: i32| {
        let v = (n as f64).ln().powi(p);
        if p % 2 == 0 { v } else { -v }
    };
    let mut q = vec![Complex64::new(0.0, 0.0); m + 1];
    // −a q(n) + Σ_{d | n, d < n} q(d) D(n/d) = N(n)
    let mut conv = vec![Complex64::new(0.0, 0.0); m + 1];
    for n in 2..=m {
        let qn = (conv[n] - neg_pow(n, k as i32 + 1)) / a;
        q[n] = qn;
        let mut j = 2;
        while n * j <= m {
            conv[n * j] += qn * neg_pow(j, k as i32);
            j += 1;
        }
    }
    (2..=m).map(|n| (CoeffIndex::integer(n as u64), q[n])).collect()
}

/// ζ^(k+1)/ζ^(k) as a generalized Dirichlet series over dyadic rationals.
/// With y = n/2: ζ^(k)(s) = (−log 2)^k 2^{-s} G(s), G = Σ_{n≥2} (log n / log 2)^k y^{-s},
/// so Q = (−log 2)^{−k} Σ_{n≥2} (−log n)^{k+1} y^{-s} · G^{-1}.
fn oracle_zero(k: u32, cutoff: u64) -> BTreeMap<CoeffIndex, Complex64> {
    let limit = cutoff as f64;
    // Indices as (odd part, power of two).
    type Key = (u64, i64);
    let key = |n: u64| CoeffIndex::new(n, 1).odd_exp();
    let value = |x: Key| x.0 as f64 * 2f64.powi(x.1 as i32);

    let g: Vec<(Key, f64)> = (3..=2 * cutoff)
        .map(|n| (key(n), (ln(n) / LN_2).powi(k as i32)))
        .filter(|(x, _)| value(*x) <= limit)
        .collect();

    // Support of G^{-1}: products of G's non-unit indices, bounded by the cutoff value.
    let mut support: Vec<Key> = vec![(1, 0)];
    let mut frontier = vec![(1u64, 0i64)];
    let mut seen: std::collections::HashSet<Key> = support.iter().copied().collect();
    while let Some(z) = frontier.pop() {
        for (y, _) in &g {
            let p = (z.0 * y.0, z.1 + y.1);
            if value(p) <= limit && seen.insert(p) {
                support.push(p);
                frontier.push(p);
            }
        }
    }
    support.sort_by(|x, y| value(*x).total_cmp(&value(*y)));

    // H = G^{-1}: H(1) = 1, H(x) = −Σ_{y ≠ 1} G(y) H(x/y).
    let mut h: HashMap<Key, f64> = HashMap::with_capacity(support.len());
    for &x in &support {
        if x == (1, 0) {
            h.insert(x, 1.0);
            continue;
        }
        let mut acc = 0.0;
        for (y, gy) in &g {
            if x.0 % y.0 == 0 {
                if let Some(hz) = h.get(&(x.0 / y.0, x.1 - y.1)) {
                    acc -= gy * hz;
                }
            }
        }
        h.insert(x, acc);
    }

    let scale = (-LN_2).powi(k as i32).recip();
    let sign = if (k + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let mut out: BTreeMap<CoeffIndex, Complex64> = BTreeMap::new();
    for n in 2..=2 * cutoff {
        let y = key(n);
        if value(y) > limit {
            break;
        }
        let fy = scale * sign * ln(n).powi(k as i32 + 1);
        for (&z, &hz) in &h {
            let x = (y.0 * z.0, y.1 + z.1);
            if value(x) > limit {
                continue;
            }
            let idx = CoeffIndex::from_odd_exp(x.0, x.1);
            if idx.numerator > cutoff {
                continue;
            }
            *out.entry(idx).or_default() += fy * hz;
        }
    }
    out
}
