//! Reproducible random coefficient ensembles.
//!
//! Sample `i` of an [`EnsembleSpec`] is a pure function of `(spec, i)`:
//!
//! * the per-sample key is `splitmix64(master_seed ^ splitmix64(i))`, using
//!   Vigna's SplitMix64 finalizer;
//! * the key seeds a PCG-XSL-RR 128/64 generator (`rand_pcg::Pcg64`) with state
//!   `key << 64 | splitmix64(key)` on the fixed stream [`PCG_STREAM`];
//! * coefficients `c_0, c_1, ..., c_n` are drawn in that order.
//!
//! Both algorithms are frozen by a golden-value test; changing either changes
//! every published number.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand_core::Rng;
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// PCG stream selector shared by all samples.
pub const PCG_STREAM: u128 = 0x4b61_6352_6f6f_7473_5043_4736_3453_7472;

const TWO_POW_53: f64 = 9_007_199_254_740_992.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distribution {
    /// Standard normal, as a 53-bit dyadic (`scale_exp = 53`).
    Gaussian,
    /// `±1` with equal probability.
    Rademacher,
    /// Uniform on `(-1, 1)` over the odd multiples of `2^-53`.
    UniformPm1,
    /// Uniform on `{-1, 0, 1}`.
    ThreePoint,
}

impl Distribution {
    pub const ALL: [Distribution; 4] =
        [Distribution::Gaussian, Distribution::Rademacher, Distribution::UniformPm1, Distribution::ThreePoint];

    pub fn name(self) -> &'static str {
        match self {
            Distribution::Gaussian => "gaussian",
            Distribution::Rademacher => "rademacher",
            Distribution::UniformPm1 => "uniform_pm1",
            Distribution::ThreePoint => "three_point",
        }
    }

    pub fn scale_exp(self) -> i64 {
        match self {
            Distribution::Gaussian | Distribution::UniformPm1 => 53,
            Distribution::Rademacher | Distribution::ThreePoint => 0,
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Distribution::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown distribution '{s}' (expected gaussian, rademacher, uniform_pm1 or three_point)")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub dist: Distribution,
    pub degree: usize,
    pub master_seed: u64,
}

impl EnsembleSpec {
    pub fn new(dist: Distribution, degree: usize, master_seed: u64) -> Result<Self> {
        if degree == 0 {
            return Err(Error::BadDegree("ensemble degree must be at least 1".into()));
        }
        Ok(EnsembleSpec { dist, degree, master_seed })
    }
}

/// SplitMix64 output function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for sample `index` of the stream seeded by `master_seed`.
pub fn sample_rng(master_seed: u64, index: u64) -> Pcg64 {
    let key = splitmix64(master_seed ^ splitmix64(index));
    let state = ((key as u128) << 64) | splitmix64(key) as u128;
    Pcg64::new(state, PCG_STREAM)
}

fn unit53(rng: &mut Pcg64) -> f64 {
    (rng.next_u64() >> 11) as f64 / TWO_POW_53
}

fn draw(dist: Distribution, rng: &mut Pcg64, count: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(count);
    match dist {
        Distribution::Gaussian => {
            while out.len() < count {
                // Box-Muller; 1 - u keeps the logarithm finite.
                let u1 = 1.0 - unit53(rng);
                let u2 = unit53(rng);
                let r = (-2.0 * u1.ln()).sqrt();
                let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
                for g in [r * c, r * s] {
                    if out.len() < count {
                        out.push(BigInt::from((g * TWO_POW_53).round() as i64));
                    }
                }
            }
        }
        Distribution::Rademacher => {
            for _ in 0..count {
                out.push(BigInt::from(if rng.next_u64() >> 63 == 1 { 1 } else { -1 }));
            }
        }
        Distribution::UniformPm1 => {
            for _ in 0..count {
                let k = (rng.next_u64() >> 11) as i64;
                out.push(BigInt::from(2 * k - ((1i64 << 53) - 1)));
            }
        }
        Distribution::ThreePoint => {
            // Largest multiple of 3 not exceeding 2^64; reject above it.
            let limit = u64::MAX - u64::MAX % 3;
            while out.len() < count {
                let x = rng.next_u64();
                if x < limit {
                    out.push(BigInt::from((x % 3) as i64 - 1));
                }
            }
        }
    }
    out
}

/// Sample polynomial `index` of `spec` (degree `spec.degree`, formal length `n + 1`).
pub fn sample(spec: &EnsembleSpec, index: u64) -> IntPolynomial {
    let mut rng = sample_rng(spec.master_seed, index);
    let coeffs = draw(spec.dist, &mut rng, spec.degree + 1);
    IntPolynomial::new(coeffs, spec.dist.scale_exp())
}

/// `P_m`: keeps coefficients `0..=m`, same scale.
pub fn truncate(p: &IntPolynomial, m: usize) -> Result<IntPolynomial> {
    if m > p.formal_degree() {
        return Err(Error::BadDegree(format!(
            "cannot truncate a polynomial of formal degree {} to degree {m}",
            p.formal_degree()
        )));
    }
    Ok(IntPolynomial::new(p.coeffs()[..=m].to_vec(), p.scale_exp()))
}
