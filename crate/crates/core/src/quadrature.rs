//! Adaptive Gauss–Kronrod (7/15) quadrature.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError<E> {
    #[error("refinement stalled at depth {depth} on [{lo}, {hi}]")]
    Stall { lo: f64, hi: f64, depth: u32 },
    #[error(transparent)]
    Integrand(E),
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<E>(f: &impl Fn(f64) -> Result<f64, E>, lo: f64, hi: f64) -> Result<(f64, f64), E> {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let pair = f(c - h * XGK[i])? + f(c + h * XGK[i])?;
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    Ok((k * h, (k - g).abs() * h))
}

/// ∫_lo^hi f with absolute error about `tol_per_unit · (hi − lo)`,
/// bisecting at most `max_depth` times along any branch.
pub fn integrate<E>(
    f: &impl Fn(f64) -> Result<f64, E>,
    lo: f64,
    hi: f64,
    tol_per_unit: f64,
    max_depth: u32,
) -> Result<f64, QuadratureError<E>> {
    if hi <= lo {
        return Ok(0.0);
    }
    recurse(f, lo, hi, tol_per_unit, max_depth, 0)
}

fn recurse<E>(
    f: &impl Fn(f64) -> Result<f64, E>,
    lo: f64,
    hi: f64,
    tol: f64,
    max_depth: u32,
    depth: u32,
) -> Result<f64, QuadratureError<E>> {
    let (v, err) = gk15(f, lo, hi).map_err(QuadratureError::Integrand)?;
    if err <= tol * (hi - lo) || err <= 1e-15 * v.abs() {
        return Ok(v);
    }
    if depth >= max_depth {
        return Err(QuadratureError::Stall { lo, hi, depth });
    }
    let mid = 0.5 * (lo + hi);
    Ok(recurse(f, lo, mid, tol, max_depth, depth + 1)? + recurse(f, mid, hi, tol, max_depth, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_log_singularity() {
        let ok = |x: f64| -> Result<f64, ()> { Ok(x.powi(5) - 3.0 * x) };
        let v = integrate(&ok, 0.0, 2.0, 1e-12, 30).unwrap();
        assert!((v - (64.0 / 6.0 - 6.0)).abs() < 1e-13);
        // ∫_0^1 log(x² + d²)/2 dx with d = 1e-6.
        let d: f64 = 1e-6;
        let g = |x: f64| -> Result<f64, ()> { Ok(0.5 * (x * x + d * d).ln()) };
        let v = integrate(&g, 0.0, 1.0, 1e-10, 40).unwrap();
        let exact = 0.5 * (1.0 + d * d).ln() - 1.0 + d * (1.0 / d).atan();
        assert!((v - exact).abs() < 1e-9, "{v} {exact}");
    }

    #[test]
    fn stalls_on_non_integrable_spike() {
        let g = |x: f64| -> Result<f64, ()> { Ok(1.0 / (x - 0.3).abs()) };
        assert!(matches!(integrate(&g, 0.0, 1.0, 1e-10, 12), Err(QuadratureError::Stall { .. })));
    }
}
