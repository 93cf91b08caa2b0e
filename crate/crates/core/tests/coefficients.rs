use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::LN_2;
use zap_core::coefficients::{alpha, alpha_index, alpha_oracle, alpha_zero, alpha_zero_magnitude, CoeffIndex};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn frozen_enumeration_values() {
    let l2 = LN_2;
    let l3 = 3f64.ln();
    // Single factorization (2).
    let v = alpha(1, c(1.0, 0.0), 2);
    assert!((v.re - (-l2 * l2)).abs() <= 1e-15 && v.im == 0.0);
    assert!((v.re - -0.480_453_013_918_201_4).abs() < 1e-15);
    // (4) and (2, 2).
    let v = alpha(1, c(1.0, 0.0), 4);
    assert!((v.re - (-4.0 * l2 * l2 + l2.powi(3))).abs() < 1e-15);
    assert!((v.re - -1.588_787_403_683_876).abs() < 1e-14);

    assert_eq!(alpha_index(1, c(1.0, 0.0), &CoeffIndex::new(5, 1)), c(0.0, 0.0));

    assert!((alpha_zero(1, &CoeffIndex::integer(1)).re + l2).abs() < 1e-15);
    // 3/2 = 3/2 (l = 0) and 2·3/4 (l = 1).
    let v = alpha_zero(1, &CoeffIndex::new(3, 1)).re;
    assert!((v - (-l3 * l3 / l2 + l3)).abs() < 1e-14);
    assert!((v - -0.642_646_991_702_290_3).abs() < 1e-14);
    let v = alpha_zero(2, &CoeffIndex::new(3, 1)).re;
    assert!((v - -1.018_571_383_049_390_5).abs() < 1e-14);
    assert_eq!(alpha_zero(1, &CoeffIndex::new(1, 2)), c(0.0, 0.0));
}

#[test]
fn enumeration_matches_formal_division() {
    for (k, a) in [(1, c(1.0, 0.0)), (1, c(0.0, 1.0)), (2, c(1.0, 0.0)), (2, c(0.0, 1.0))] {
        let table = alpha_oracle(k, a, 100);
        let mut worst = 0.0f64;
        for x in 2..=100u64 {
            let want = table.get(&CoeffIndex::integer(x));
            let got = alpha(k, a, x);
            let rel = (got - want).norm() / want.norm();
            worst = worst.max(rel);
            assert!(rel <= 1e-12, "k={k} a={a} x={x}: {got} vs {want}");
        }
        println!("k={k} a={a}: worst relative error {worst:e}");
        assert!(table.entries.keys().all(CoeffIndex::is_integer));
    }
}

#[test]
fn dyadic_enumeration_matches_formal_division() {
    for k in [1, 2] {
        let table = alpha_oracle(k, c(0.0, 0.0), 100);
        let mut worst = 0.0f64;
        let mut worst_plain = 0.0f64;
        let mut compared = 0;
        for l2d in 0..=5u32 {
            for num in 1..=100u64 {
                let x = CoeffIndex::new(num, l2d);
                if x.log2_denominator != l2d || x.value() < 1.0 {
                    continue;
                }
                let want = table.get(&x);
                let got = alpha_zero(k, &x);
                let scale = alpha_zero_magnitude(k, &x);
                compared += 1;
                if scale == 0.0 {
                    assert_eq!(want, c(0.0, 0.0), "k={k} x={x}");
                    continue;
                }
                let err = (got - want).norm() / scale;
                worst = worst.max(err);
                if want.norm() > 1e-6 * scale {
                    worst_plain = worst_plain.max((got - want).norm() / want.norm());
                }
                assert!(err <= 1e-12, "k={k} x={x}: {got} vs {want} (scale {scale})");
            }
        }
        println!("k={k}: {compared} indices, worst scaled error {worst:e}, worst relative {worst_plain:e}");
        assert!(compared > 150);
    }
}

#[test]
fn primes_have_a_single_factorization() {
    let primes = [2u64, 3, 5, 7, 11, 13, 97, 101, 7919];
    let ladder = [c(1.0, 0.0), c(0.0, 1.0), c(2.0, -3.0), c(0.1, 0.0), c(-5.0, 0.5)];
    for k in 1..=3u32 {
        for &a in &ladder {
            for &p in &primes {
                let want = (if k % 2 == 0 { 1.0 } else { -1.0 }) * (p as f64).ln().powi(k as i32 + 1) / a;
                let got = alpha(k, a, p);
                assert!((got - want).norm() <= 1e-14 * want.norm(), "k={k} a={a} p={p}");
            }
        }
    }
}

#[test]
fn oracle_table_is_complete_up_to_cutoff() {
    let table = alpha_oracle(1, c(2.0, 0.0), 64);
    assert_eq!(table.entries.len(), 63);
    let table = alpha_oracle(1, c(0.0, 0.0), 64);
    assert!(table.entries.keys().all(|x| x.numerator <= 64 && x.value() >= 1.0));
    for x in table.entries.keys().filter(|x| x.log2_denominator <= 3) {
        assert!(alpha_zero_magnitude(1, x) > 0.0, "{x}");
    }
}

proptest! {
    #[test]
    fn conjugating_a_conjugates_alpha(k in 1u32..4, re in -5.0f64..5.0, im in -5.0f64..5.0, x in 2u64..200) {
        prop_assume!(re.hypot(im) > 0.05);
        let a = c(re, im);
        let v = alpha(k, a, x);
        let w = alpha(k, a.conj(), x);
        prop_assert!((w - v.conj()).norm() <= 1e-13 * v.norm().max(1e-300));
    }

    #[test]
    fn dyadic_index_round_trip(num in 1u64..100_000, l2d in 0u32..20) {
        let x = CoeffIndex::new(num, l2d);
        prop_assert!(x.log2_denominator == 0 || x.numerator % 2 == 1);
        prop_assert_eq!(CoeffIndex::from_f64(x.value()), Some(x));
    }
}
