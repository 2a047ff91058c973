//! Independent oracles for the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Fractional bits of the fixed-point arithmetic.
const P: u32 = 400;

fn one() -> BigInt {
    BigInt::one() << P
}

fn mul(a: &BigInt, b: &BigInt) -> BigInt {
    (a * b) >> P
}

/// `arctan(1/x)` by its alternating series.
fn arctan_inv(x: u32) -> BigInt {
    let x2 = BigInt::from(x) * x;
    let mut power = one() / x; // 1/x^{2k+1}
    let mut sum = BigInt::zero();
    let mut k = 0u32;
    while !power.is_zero() {
        let term = &power / (2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

fn pi() -> BigInt {
    arctan_inv(5) * 16 - arctan_inv(239) * 4
}

/// `(cos r, sin r)` by Taylor series, for `|r| <= 4`.
fn cos_sin(r: &BigInt) -> (BigInt, BigInt) {
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut term = one(); // r^k / k!
    let mut k = 0u32;
    while !term.is_zero() {
        match k % 4 {
            0 => cos += &term,
            1 => sin += &term,
            2 => cos -= &term,
            _ => sin -= &term,
        }
        k += 1;
        term = mul(&term, r) / k;
    }
    (cos, sin)
}

fn to_f64(x: &BigInt) -> f64 {
    // keep 64 fractional bits before the float conversion
    let head = x >> (P - 64);
    head.to_f64().unwrap() / 2f64.powi(64)
}

/// `g(t)` for a dyadic `t` (exact in binary) to about 1e-18.
///
/// Lower sum `l = 0, -1, ..., -120` (remainder below `t^2 2^{-120}`), upper
/// sum `l = 1..=70` (remainder below `2^{-69}`).
pub fn g_oracle(t: f64) -> (f64, f64) {
    let bits = 48;
    let t_fixed = BigInt::from((t * 2f64.powi(bits)) as i64) << (P - bits as u32);
    assert_eq!(to_f64(&t_fixed), t, "t must be a short dyadic rational");
    let two_pi = pi() << 1;
    let mut re = BigInt::zero();
    let mut im = BigInt::zero();
    for m in 0..=120u32 {
        // l = -m: u = t 2^{-m}, weight 2^{m}
        let u = &t_fixed >> m;
        let (c, s) = cos_sin(&u);
        re += (c - one()) << m;
        im += (s - &u) << m;
    }
    for l in 1..=70u32 {
        let u = &t_fixed << l;
        let k: BigInt = (&u + (&two_pi >> 1)) / &two_pi;
        let r: BigInt = &u - k * &two_pi;
        assert!(r.abs() <= one() * 4);
        let (c, s) = cos_sin(&r);
        re += (c - one()) >> l;
        im += s >> l;
    }
    (to_f64(&re), to_f64(&im))
}

/// Closed-form CDF of the one-sided 1/2-stable law with Laplace exponent `sqrt(pi s)`.
pub fn levy_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        statrs::function::erf::erfc((std::f64::consts::PI / (4.0 * x)).sqrt())
    }
}

/// Kolmogorov-distribution style bound used for loose statistical checks.
pub fn ks_bound(n: usize, c: f64) -> f64 {
    c / (n as f64).sqrt()
}
