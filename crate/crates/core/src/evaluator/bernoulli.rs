use std::f64::consts::PI;
use std::sync::OnceLock;

pub(crate) const MAX_TERMS: usize = 40;

/// `B_{2j} / (2j)!` for `j = 1..=MAX_TERMS`, via `B_{2j}/(2j)! = (-1)^{j+1} 2 ζ(2j) / (2π)^{2j}`.
fn table() -> &'static [f64; MAX_TERMS] {
    static TABLE: OnceLock<[f64; MAX_TERMS]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [0.0; MAX_TERMS];
        let two_pi = 2.0 * PI;
        for (idx, slot) in out.iter_mut().enumerate() {
            let j = idx + 1;
            let z = zeta_even(2 * j);
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            // (2π)^{-2j} built by repeated division to stay accurate.
            let mut scale = 1.0;
            for _ in 0..2 * j {
                scale /= two_pi;
            }
            *slot = sign * 2.0 * z * scale;
        }
        out
    })
}

/// ζ(m) for even m ≥ 2, double precision.
fn zeta_even(m: usize) -> f64 {
    match m {
        2 => PI * PI / 6.0,
        4 => PI.powi(4) / 90.0,
        6 => PI.powi(6) / 945.0,
        _ => {
            let n_max = 40usize;
            let mf = m as f64;
            let mut sum = 0.0;
            for n in (1..n_max).rev() {
                sum += (n as f64).powf(-mf);
            }
            let nf = n_max as f64;
            // Euler–Maclaurin tail from n_max.
            sum + nf.powf(1.0 - mf) / (mf - 1.0) + 0.5 * nf.powf(-mf) + mf / 12.0 * nf.powf(-mf - 1.0)
        }
    }
}

/// `B_{2j}/(2j)!` for `1 ≤ j ≤ 40`.
pub fn bernoulli_over_factorial(j: usize) -> f64 {
    assert!((1..=MAX_TERMS).contains(&j), "Bernoulli index out of range");
    table()[j - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn first_bernoulli_numbers() {
        let exact = [
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
            7.0 / 6.0,
        ];
        for (i, b) in exact.iter().enumerate() {
            let j = i + 1;
            let got = bernoulli_over_factorial(j) * factorial(2 * j as u32);
            assert!((got - b).abs() <= 1e-14 * b.abs(), "B_{} = {got}", 2 * j);
        }
    }

    #[test]
    fn signs_alternate() {
        for j in 1..MAX_TERMS {
            assert!(bernoulli_over_factorial(j) * bernoulli_over_factorial(j + 1) < 0.0);
        }
    }
}
