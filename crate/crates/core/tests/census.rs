use num_complex::Complex64;
use proptest::prelude::*;
use zap_core::census::{beta_sum_check, census, expsum, line_log_integral, littlewood_balance, CensusError};
use zap_core::coefficients::CoeffIndex;
use zap_core::evaluator::{zeta_jet, EvalConfig};
use zap_core::quadrature::integrate;
use zap_core::regions::RegionBounds;
use zap_core::rootscan::{locate, APoint, Rect, ScanWindow};
use zap_core::sweep::{scan_in_memory, RunManifest};
use zap_core::tunables::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn scan(k: u32, a: Complex64, t1: f64) -> Vec<APoint> {
    let cfg = EvalConfig::default();
    let (lo, hi) = RegionBounds::compute(k, a, t1, &cfg).unwrap().scan_sigma(0.25);
    let m = RunManifest::plan(k, a, 1.0, t1, 10.0, lo, hi, &cfg).unwrap();
    let (points, failed) = scan_in_memory(&m, 4).unwrap();
    assert!(failed.is_empty(), "{failed:?}");
    points
}

fn synthetic(beta: f64, gamma: f64) -> APoint {
    APoint {
        k: 1,
        a_re: 1.0,
        a_im: 0.0,
        beta,
        gamma,
        residual: 0.0,
        cert_box: Rect::new(beta - 1e-4, beta + 1e-4, gamma - 1e-4, gamma + 1e-4),
        window_id: 0,
        multiplicity: 1,
    }
}

#[test]
fn empty_census() {
    let r = census(1, c(1.0, 0.0), 1000.0, 1000.0, &[]).unwrap();
    assert_eq!((r.n1, r.n2, r.n3, r.total), (0, 0, 0, 0));
    assert!(r.boundary.is_empty());
    assert_eq!(r.beta_excess, 0.0);
}

#[test]
fn band_edges_are_closed_and_listed() {
    let t = 1000.0;
    let hw = zap_core::asymptotics::band_halfwidth(t).unwrap();
    let pts = [synthetic(0.5 + hw, 1100.0), synthetic(0.5 - hw, 1200.0), synthetic(2.0, 1300.0), synthetic(-3.0, 1400.0)];
    let r = census(1, c(1.0, 0.0), t, 1000.0, &pts).unwrap();
    assert_eq!((r.n1, r.n2, r.n3), (1, 1, 2));
    assert_eq!(r.boundary.len(), 2);
}

#[test]
fn expsum_below_first_point_is_empty() {
    let pts = [synthetic(0.7, 30.0)];
    let r = expsum(1, c(1.0, 0.0), &CoeffIndex::integer(2), 20.0, &pts).unwrap();
    assert_eq!(r.observed, c(0.0, 0.0));
    assert!((r.predicted.re - 20.0 / (2.0 * std::f64::consts::PI) * -(2f64.ln().powi(2))).abs() < 1e-12);
}

#[test]
fn expsum_against_main_term() {
    let points = scan(1, c(1.0, 0.0), 500.0);
    for x in [CoeffIndex::integer(2), CoeffIndex::new(5, 1)] {
        let r = expsum(1, c(1.0, 0.0), &x, 500.0, &points).unwrap();
        assert!(r.remainder_ratio <= EXPSUM_CAP, "x={x}: {r:?}");
    }
}

#[test]
fn littlewood_examples() {
    let cfg = EvalConfig::default();
    for (a, t, u) in [(c(2.0, 0.0), 100.0, 50.0), (c(0.0, 1.0), 200.0, 100.0)] {
        let points = scan(1, a, t + u + 10.0);
        let r = littlewood_balance(1, a, t, u, &points, &cfg).unwrap();
        assert!(r.ratio <= LITTLEWOOD_CAP, "a={a}: {r:?}");
        println!("a={a} T={t} U={u}: {r:?}");
    }
    assert!(matches!(littlewood_balance(1, c(0.0, 0.0), 100.0, 10.0, &[], &cfg), Err(CensusError::ZeroA)));
}

#[test]
fn line_integral_reference_values() {
    let cfg = EvalConfig::default();
    // mpmath quad over half-unit panels, 20 digits.
    for (a, want) in [(c(2.0, 0.0), 47.703_839_526_585_18), (c(0.0, 1.0), 115.629_613_713_184_33)] {
        let points = scan(1, a, 210.0);
        let r = littlewood_balance(1, a, 100.0, 100.0, &points, &cfg).unwrap();
        assert!((r.predicted.re - want).abs() < 1e-9, "a={a}: {}", r.predicted.re);
    }
}

#[test]
fn littlewood_window_without_right_points() {
    let cfg = EvalConfig::default();
    let a = c(2.0, 0.0);
    let points = scan(1, a, 200.0);
    let mut found = false;
    for i in 0..50 {
        let (t, u) = (100.0 + 2.0 * i as f64, 2.0);
        if points.iter().any(|p| p.gamma > t && p.gamma < t + u && p.beta > 0.5) {
            continue;
        }
        let r = littlewood_balance(1, a, t, u, &points, &cfg).unwrap();
        assert_eq!(r.observed.re, 0.0);
        assert!(r.predicted.re.abs() / t.ln() <= LITTLEWOOD_CAP, "{r:?}");
        found = true;
    }
    assert!(found);
}

#[test]
fn excised_singularity_matches_regularized_integral() {
    let cfg = EvalConfig::default();
    let g0 = 150.0;
    // a-point exactly on the line.
    let a = zeta_jet(c(0.5, g0), 1, &cfg).unwrap().derivative(1);
    let pts = locate(1, a, &ScanWindow::new(0, 149.0, 151.0, -16.0, 3.0), &cfg).unwrap();
    let on_line = pts.iter().find(|p| (p.gamma - g0).abs() < 1e-9).expect("point on the line");
    assert!((on_line.beta - 0.5).abs() < 1e-9);
    let v = line_log_integral(1, a, 149.5, 1.0, &pts, &cfg).unwrap();

    // log|a − ζ'(1/2+it)| − log|t − γ0| is smooth; its integral plus ∫ log|t − γ0|.
    let f = |t: f64| -> Result<f64, ()> {
        let z = zeta_jet(c(0.5, t), 1, &cfg).unwrap().derivative(1);
        Ok((a - z).norm().ln() - (t - g0).abs().ln())
    };
    let smooth = integrate(&f, 149.5, g0, 1e-11, 40).unwrap() + integrate(&f, g0, 150.5, 1e-11, 40).unwrap();
    let log_part = 2.0 * (0.5 * 0.5f64.ln() - 0.5);
    let want = smooth + log_part;
    assert!((v - want).abs() < 1e-6, "{v} vs {want}");
}

#[test]
fn beta_sum_against_main_term() {
    let (a, t, u) = (c(2.0, 0.0), 500.0, 500.0);
    let points = scan(1, a, t + u);
    let r = beta_sum_check(1, a, BETA_SUM_B, t, u, &points);
    assert!(r.ratio <= BETA_SUM_CAP, "{r:?}");
    println!("{r:?}");

    let inside: Vec<&APoint> = points.iter().filter(|p| p.gamma > t && p.gamma < t + u).collect();
    let sum_beta: f64 = inside.iter().map(|p| p.beta).sum();
    assert!((r.observed.re - BETA_SUM_B * inside.len() as f64 - sum_beta).abs() < 1e-9);

    let empty = beta_sum_check(1, a, BETA_SUM_B, t, 0.0, &points);
    assert_eq!((empty.observed.re, empty.predicted.re), (0.0, 0.0));
}

#[test]
fn off_band_share_shrinks_with_height() {
    let a = c(1.0, 0.0);
    let points = scan(1, a, 4000.0);
    let mut shares = Vec::new();
    for t in [200.0, 500.0, 1000.0, 2000.0] {
        let r = census(1, a, t, t, &points).unwrap();
        assert_eq!(r.n1 + r.n2 + r.n3, r.total);
        assert!(r.beta_excess <= BETA_EXCESS_CAP * t * t.ln().ln(), "{r:?}");
        shares.push((r.n1 + r.n2) as f64 / r.total as f64);
    }
    println!("off-band shares {shares:?}");
    assert!(shares.windows(2).all(|w| w[1] <= w[0] + CLUSTER_TREND_TOL), "{shares:?}");
}

proptest! {
    #[test]
    fn census_partitions(betas in proptest::collection::vec((-20.0f64..3.0, 1000.0f64..2000.0), 0..200)) {
        let pts: Vec<APoint> = betas.iter().map(|&(b, g)| synthetic(b, g)).collect();
        let r = census(1, c(1.0, 0.0), 1000.0, 1000.0, &pts).unwrap();
        prop_assert_eq!(r.n1 + r.n2 + r.n3, r.total);
        let inside = pts.iter().filter(|p| p.gamma > 1000.0 && p.gamma < 2000.0).count() as u64;
        prop_assert_eq!(r.total, inside);
    }
}
