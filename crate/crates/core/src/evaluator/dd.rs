use num_complex::Complex64;

/// Error-free addition: `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Double-double accumulator for a complex sum.
///
/// Each component is kept as an unevaluated `hi + lo` pair, so rounding
/// errors of the running sum are carried instead of discarded.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re_hi: f64,
    re_lo: f64,
    im_hi: f64,
    im_lo: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        let (s, e) = two_sum(self.re_hi, z.re);
        let lo = self.re_lo + e;
        let (hi, lo) = two_sum(s, lo);
        self.re_hi = hi;
        self.re_lo = lo;

        let (s, e) = two_sum(self.im_hi, z.im);
        let lo = self.im_lo + e;
        let (hi, lo) = two_sum(s, lo);
        self.im_hi = hi;
        self.im_lo = lo;
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re_hi + self.re_lo, self.im_hi + self.im_lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_bits() {
        let mut acc = CompensatedSum::new();
        acc.add(Complex64::new(1e16, -1e16));
        for _ in 0..1000 {
            acc.add(Complex64::new(1.0, 1.0));
        }
        acc.add(Complex64::new(-1e16, 1e16));
        assert_eq!(acc.value(), Complex64::new(1000.0, 1000.0));

        let mut naive = Complex64::new(1e16, 0.0);
        for _ in 0..1000 {
            naive += Complex64::new(1.0, 0.0);
        }
        naive -= Complex64::new(1e16, 0.0);
        assert_ne!(naive.re, 1000.0);
    }
}
