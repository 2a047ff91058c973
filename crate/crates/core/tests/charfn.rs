mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use semistable::charfn::{
    cdf_from_cf, cauchy_cdf, dyadic_gamma, g_exponent, g_gamma_exponent, normal_cdf, DEFAULT_SERIES_TOL,
};
use semistable::{CdfTable, CfExponent};

#[test]
fn g_matches_high_precision_series() {
    for &t in &[0.5, 1.0, 2.0, 5.0, 10.0] {
        let (re, im) = common::g_oracle(t);
        let g = g_exponent(t, DEFAULT_SERIES_TOL);
        assert!((g.re - re).abs() < 1e-12, "t = {t}: re {} vs {re}", g.re);
        assert!((g.im - im).abs() < 1e-12, "t = {t}: im {} vs {im}", g.im);
    }
}

/// `(t, Re g(t), Im g(t))` from the fixed-point oracle.
const FROZEN: [(f64, f64, f64); 5] = [
    (0.5, -1.1885147117929484, 0.5952564149600581),
    (1.0, -2.377029423585897, 0.19051282992011612),
    (2.0, -4.754058847171794, -1.6189743401597678),
    (5.0, -11.54600980517889, -11.416273845390151),
    (10.0, -23.09201961035778, -32.8325476907803),
];

#[test]
fn frozen_values() {
    for &(t, re, im) in &FROZEN {
        let g = g_exponent(t, DEFAULT_SERIES_TOL);
        assert!((g.re - re).abs() < 1e-12 && (g.im - im).abs() < 1e-12, "t = {t}");
    }
    // Re g is exactly linear along dyadic t
    assert!((FROZEN[2].1 - 2.0 * FROZEN[1].1).abs() < 1e-14);
}

#[test]
fn telescoping_on_grid() {
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let t = -50.0 + 100.0 * i as f64 / 999.0;
        let lhs = g_exponent(t, DEFAULT_SERIES_TOL);
        let rhs = 2.0 * g_exponent(t / 2.0, DEFAULT_SERIES_TOL) - Complex64::new(0.0, t);
        worst = worst.max((lhs - rhs).norm());
    }
    assert!(worst < 1e-10, "{worst}");
}

#[test]
fn g_gamma_is_a_rescaled_convolution_power() {
    for &gamma in &[1.0, 1.25, 1.5, 1.999] {
        let h = CfExponent::petersburg_g().dilate(1.0 / gamma).convolution_power(gamma).unwrap().shift(-gamma.log2());
        for i in 0..50 {
            let t = -20.0 + 40.0 * i as f64 / 49.0;
            let direct = g_gamma_exponent(t, gamma, DEFAULT_SERIES_TOL).unwrap();
            assert!((h.eval(t) - direct).norm() < 1e-12, "gamma {gamma} t {t}");
        }
    }
}

#[test]
fn inversion_tracks_closed_forms() {
    let c = CfExponent::cauchy();
    for i in 0..=200 {
        let x = -10.0 + 0.1 * i as f64;
        assert!((cdf_from_cf(&c, x, 1e-8).unwrap() - cauchy_cdf(x)).abs() < 1e-6);
    }
    let g = CfExponent::gaussian();
    for &x in &[0.0, 1.0, -1.0, 1.959964] {
        assert!((cdf_from_cf(&g, x, 1e-8).unwrap() - normal_cdf(x)).abs() < 1e-6);
    }
    let levy = CfExponent::one_sided_stable(0.5, 1.0).unwrap();
    for i in 0..=200 {
        let x = 0.1 * 1000f64.powf(i as f64 / 200.0);
        assert!((cdf_from_cf(&levy, x, 1e-8).unwrap() - common::levy_cdf(x)).abs() < 1e-6, "x = {x}");
    }
}

#[test]
fn cauchy_limits() {
    let c = CfExponent::cauchy();
    assert!(cdf_from_cf(&c, -1e3, 1e-8).unwrap() < 1e-3 + 1e-8);
    assert!(cdf_from_cf(&c, 1e3, 1e-8).unwrap() > 1.0 - 1e-3 - 1e-8);
}

#[test]
fn g_inversion_is_stable_across_tolerances() {
    let h = CfExponent::petersburg_g();
    for &x in &[-2.0, 0.0, 1.5, 7.0, 60.0, 400.0] {
        let a = cdf_from_cf(&h, x, 1e-6).unwrap();
        let b = cdf_from_cf(&h, x, 1e-10).unwrap();
        assert!((a - b).abs() < 2e-6, "x = {x}: {a} vs {b}");
    }
}

#[test]
fn g_tables_agree_with_single_inversions() {
    let h = CfExponent::g_gamma(1.5).unwrap();
    let table = CdfTable::semistable(&h, -3.0, 300.0, 1e-9).unwrap();
    for &x in &[-2.5, -0.37, 0.0, 1.234, 9.99, 31.0, 75.0, 250.0] {
        let single = cdf_from_cf(&h, x, 1e-9).unwrap();
        let tab = table.eval(x);
        // interpolation error dominates inside the dense part
        assert!((single - tab).abs() < 2e-5, "x = {x}: {single} vs {tab}");
    }
    for w in table.values().windows(2) {
        assert!(w[1] >= w[0] - 1e-9);
    }
}

#[test]
fn semistable_table_tail_beyond_last_node() {
    let h = CfExponent::g_gamma(1.5).unwrap();
    let table = CdfTable::semistable(&h, -3.0, 512.0, 1e-9).unwrap();
    for i in 0..40 {
        let x = 515.0 * 1.06f64.powi(i);
        let d = (table.eval(x) - cdf_from_cf(&h, x, 1e-9).unwrap()).abs();
        assert!(d < 5e-4, "x = {x}: {d:e}");
    }
}

#[test]
fn g_one_equals_g_two() {
    // G_1 and the limit along gamma -> 2 are the same law
    let a = CfExponent::petersburg_g();
    let b = CfExponent::g_gamma(2.0 - 1e-9).unwrap();
    for &x in &[-1.0, 0.5, 3.0, 20.0] {
        let fa = cdf_from_cf(&a, x, 1e-9).unwrap();
        let fb = cdf_from_cf(&b, x, 1e-9).unwrap();
        assert!((fa - fb).abs() < 1e-6, "x = {x}: {fa} vs {fb}");
    }
}

proptest! {
    #[test]
    fn builtin_exponents_are_valid(t in -200.0f64..200.0) {
        let kinds = [
            CfExponent::petersburg_g(),
            CfExponent::g_gamma(1.37).unwrap(),
            CfExponent::cauchy(),
            CfExponent::gaussian(),
            CfExponent::one_sided_stable(0.3, 2.0).unwrap(),
        ];
        for h in &kinds {
            let v = h.eval(t);
            prop_assert!(v.re <= 1e-12);
            let w = h.eval(-t);
            prop_assert!((v.conj() - w).norm() <= 1e-9 * (1.0 + v.norm()));
            prop_assert_eq!(h.eval(0.0), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn dyadic_position_is_periodic(n in 1u64..(1 << 40)) {
        let g = dyadic_gamma(n);
        prop_assert!((1.0..2.0).contains(&g));
        prop_assert_eq!(dyadic_gamma(2 * n), g);
    }
}

