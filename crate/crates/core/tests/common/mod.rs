//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// Exact density radicand `1/(t^2-1)^2 - m^2 t^(2n) / (t^(2m)-1)^2`, `m = n+1`,
/// at the dyadic `t` (which must not be 1), rounded to `f64` once.
pub fn exact_radicand(n: usize, t: f64) -> f64 {
    let (mant, exp) = split(t);
    // t = a / D with D = 2^k.
    let a = BigInt::from(mant);
    let d = BigInt::one() << exp;
    let m = n + 1;
    let a2 = &a * &a;
    let d2 = &d * &d;
    let a2m = num_traits::pow(a.clone(), 2 * m);
    let d2m = num_traits::pow(d.clone(), 2 * m);
    let u = &a2 - &d2;
    let v = &a2m - &d2m;
    let d4 = &d2 * &d2;
    let num = &d4 * &v * &v - BigInt::from(m * m) * num_traits::pow(a, 2 * n) * num_traits::pow(d, 2 * n) * &d4 * &u * &u;
    let den = &u * &u * &v * &v;
    BigRational::new(num, den).to_f64().unwrap()
}

/// `rho_n(t)` from the exact radicand.
pub fn exact_density(n: usize, t: f64) -> f64 {
    exact_radicand(n, t).max(0.0).sqrt() / PI
}

/// `t = mant / 2^exp` with `exp >= 0`, for positive `t`.
fn split(t: f64) -> (u64, u32) {
    assert!(t > 0.0 && t.is_finite());
    let mut exp = 0u32;
    let mut x = t;
    while x.fract() != 0.0 {
        x *= 2.0;
        exp += 1;
    }
    (x as u64, exp)
}

/// `rho_n(1)` by symmetric Richardson extrapolation of exact densities at
/// `1 +- eps` and `1 +- 2 eps`; the error is `O((n eps)^4)`.
pub fn endpoint_oracle(n: usize, eps: f64) -> f64 {
    let s = |e: f64| 0.5 * (exact_density(n, 1.0 + e) + exact_density(n, 1.0 - e));
    (4.0 * s(eps) - s(2.0 * eps)) / 3.0
}

/// `rho_n(t)` from the covariance form `sqrt(A C - B^2) / (pi A)` with
/// `A = sum t^(2i)`, `B = sum i t^(2i-1)`, `C = sum i^2 t^(2i-2)`. Only for
/// moderate `n` away from `|t| = 1`.
pub fn covariance_density(n: usize, t: f64) -> f64 {
    let (mut a, mut b, mut c) = (0.0, 0.0, 0.0);
    for i in 0..=n {
        let fi = i as f64;
        a += t.powi(2 * i as i32);
        if i > 0 {
            b += fi * t.powi(2 * i as i32 - 1);
            c += fi * fi * t.powi(2 * i as i32 - 2);
        }
    }
    (a * c - b * b).max(0.0).sqrt() / (PI * a)
}

/// Composite Simpson rule with `k` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, k: usize) -> f64 {
    let h = (b - a) / k as f64;
    let mut s = f(a) + f(b);
    for i in 1..k {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}
