use num_complex::Complex64;
use zap_core::evaluator::{zeta_deriv, zeta_jet, EvalConfig};
use zap_core::regions::{find_e1, find_e2, find_e2_zero, find_n_min, trivial_apoint, RegionBounds, RegionError};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn right_abscissa_examples() {
    // Σ log n / n² = −ζ'(2) ≈ 0.9375 < 1, while the majorant diverges at 1.
    assert_eq!(find_e2(1, c(1.0, 0.0)), 2.0);
    assert!(find_e2(1, c(10.0, 0.0)) <= 1.5);
    assert_eq!(find_e2(2, c(1.0, 0.0)), 2.5);
    assert_eq!(find_e2_zero(1), 3.5);
    assert_eq!(find_e2_zero(2), 4.5);
}

#[test]
fn right_abscissa_non_increasing_in_modulus() {
    for k in 1..=3 {
        let ladder: Vec<f64> = [0.1, 1.0, 10.0, 100.0].iter().map(|&m| find_e2(k, c(0.0, m))).collect();
        assert!(ladder.windows(2).all(|w| w[1] <= w[0]), "k={k}: {ladder:?}");
    }
}

#[test]
fn no_values_of_modulus_a_right_of_e2() {
    let cfg = EvalConfig::default();
    for (k, a) in [(1, c(1.0, 0.0)), (2, c(0.0, 1.0)), (1, c(2.0, 0.0))] {
        let e2 = find_e2(k, a);
        for sigma in [e2, e2 + 0.5, e2 + 3.0] {
            for i in 0..200 {
                let t = 1.0 + i as f64 * 2.5;
                let v = zeta_jet(c(sigma, t), k as usize, &cfg).unwrap().derivative(k as usize);
                assert!(v.norm() < a.norm(), "k={k} a={a} s={sigma}+{t}i");
            }
        }
    }
}

#[test]
fn left_abscissa_examples() {
    let cfg = EvalConfig::default();
    let b = RegionBounds::compute(1, c(1.0, 0.0), 200.0, &cfg).unwrap();
    assert!(b.e1 <= -1.0 && b.e1_witness > 2.0);
    assert!(b.e1_strict <= b.e1.min(-1.0));
    assert!(b.e1_strict <= b.e1 && b.e1 <= 0.0 && 1.0 <= b.e2 && b.e2 <= b.e2_strict);
    println!("k=1 a=1: e1 = {}, witness {}", b.e1, b.e1_witness);

    let z = find_e1(1, c(0.0, 0.0), 200.0, &cfg).unwrap();
    assert!(z <= -1.0);
    let huge = find_e1(1, c(1e6, 0.0), 200.0, &cfg).unwrap();
    assert!(huge < b.e1, "{huge} vs {}", b.e1);
}

#[test]
fn left_abscissa_witness_holds_on_the_grid() {
    let cfg = EvalConfig::default();
    let a = c(0.0, 1.0);
    let e1 = find_e1(1, a, 100.0, &cfg).unwrap();
    for i in 0..=990 {
        let t = 1.0 + i as f64 * 0.1;
        let v = zeta_jet(c(e1, t), 1, &cfg).unwrap().derivative(1);
        assert!(v.norm() > 2.0, "t={t}: {}", v.norm());
    }
}

#[test]
fn trivial_root_near_minus_thirty() {
    let cfg = EvalConfig::default();
    let a = c(1.0, 0.0);
    let b15 = trivial_apoint(1, a, 15, &cfg).unwrap();
    assert_eq!(b15.winding, 1);
    let r15 = b15.root.clone().unwrap();
    assert!(r15.gamma.abs() < 1e-10, "{r15:?}");
    // mpmath: −29.498480538454671, distance 0.50152 from −30.
    assert!((r15.beta - -29.498_480_538_454_671).abs() < 1e-12);
    assert!((r15.beta + 30.0).abs() < 0.51);
    assert!(b15.rect.contains_strictly(c(r15.beta, r15.gamma)));
    assert!(r15.newton_residual <= 1e-9);

    // Independent check: ζ'(σ) − 1 changes sign next to the root on the real axis.
    let f = |x: f64| zeta_deriv(1, c(x, 0.0), &cfg).unwrap().re - 1.0;
    let h = 1e-6 * r15.beta.abs();
    assert!(f(r15.beta - h).signum() != f(r15.beta + h).signum());
    let mut changes = 0;
    let mut prev = f(-30.999);
    for i in 1..=1998 {
        let x = -30.999 + i as f64 * 1e-3;
        let v = f(x);
        if v.signum() != prev.signum() {
            changes += 1;
        }
        prev = v;
    }
    assert_eq!(changes, 1);

    let r20 = trivial_apoint(1, a, 20, &cfg).unwrap().root.unwrap();
    assert!((r20.beta - -39.552_241_565_638_648).abs() < 1e-12);
    assert!((r20.beta + 40.0).abs() < (r15.beta + 30.0).abs());
}

#[test]
fn trivial_box_below_threshold_has_wrong_winding() {
    let cfg = EvalConfig::default();
    // ζ' vanishes at −4.936 and −7.075, not in the boxes around −6 and −4.
    match trivial_apoint(1, c(0.0, 0.0), 3, &cfg) {
        Err(RegionError::WindingNotOne { n: 3, winding }) => assert_eq!(winding, 0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn trivial_thresholds() {
    let cfg = EvalConfig::default();
    assert_eq!(find_n_min(1, c(1.0, 0.0), 30, &cfg).unwrap(), 8);
    assert_eq!(find_n_min(1, c(0.0, 0.0), 30, &cfg).unwrap(), 4);
    for (k, a) in [(1, c(0.0, 1.0)), (2, c(1.0, 0.0)), (2, c(0.0, 1.0)), (2, c(0.0, 0.0))] {
        let n_min = find_n_min(k, a, 30, &cfg).unwrap();
        for n in n_min..=n_min + 20 {
            let b = trivial_apoint(k, a, n, &cfg).unwrap();
            assert_eq!(b.winding, 1, "k={k} a={a} n={n}");
            let r = b.root.unwrap();
            assert!(b.rect.contains_strictly(c(r.beta, r.gamma)));
        }
    }
}
