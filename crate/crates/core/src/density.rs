//! Real-root density of Gaussian Kac polynomials and its integrals.
//!
//! For `P(t) = sum_{i<=n} xi_i t^i` with iid standard normal `xi_i`, the
//! expected number of real roots in `[a, b]` is `int_a^b rho_n(t) dt` with
//!
//! ```text
//! rho_n(t) = (1/pi) sqrt( 1/(t^2-1)^2 - (n+1)^2 t^(2n) / (t^(2n+2)-1)^2 ).
//! ```
//!
//! Both terms blow up like `(t-1)^-2` at `t = 1`. Writing `t = e^h`, `m = n+1`,
//! the radicand is `e^(-2h)/4 * (phi(h) - m^2 phi(m h))` with
//! `phi(x) = 1/sinh(x)^2 - 1/x^2`, which has no cancellation at all; `phi` is
//! evaluated by its Taylor series near zero.

use std::f64::consts::{FRAC_1_PI, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_breaks, QuadResult};

/// Constant term of the large-`n` expansion of the expected number of real
/// roots, `E N_n = (2/pi) ln n + C + 2/(pi n) + O(1/n^2)`, evaluated
/// numerically to ten digits.
pub const KAC_CONSTANT: f64 = 0.625_735_807_2;

pub const DEFAULT_REL_TOL: f64 = 1e-10;
const MAX_SEGMENTS: usize = 20_000;

/// Coefficients `d_k` of `phi(x) = sum_{k>=1} d_k x^(2k-2)`, where
/// `d_k = -2^(2k) B_(2k) (2k-1) / (2k)!`.
const PHI_SERIES: [f64; 15] = [
    -1.0 / 3.0,
    1.0 / 15.0,
    -2.0 / 189.0,
    1.0 / 675.0,
    -2.0 / 10395.0,
    1382.0 / 58046625.0,
    -4.0 / 1403325.0,
    3617.0 / 10854718875.0,
    -87734.0 / 2292899734125.0,
    349222.0 / 80596287646875.0,
    -310732.0 / 640374140030625.0,
    472728182.0 / 8779111824511153125.0,
    -2631724.0 / 443779279041223125.0,
    13571120588.0 / 20913098524817639765625.0,
    -13785346041608.0 / 195202717402382161174828125.0,
];

/// Below this `|x|` the series is used for `phi`.
const PHI_SERIES_RADIUS: f64 = 0.5;

/// `1/sinh(x)^2 - 1/x^2` for `x >= 0`.
pub(crate) fn phi(x: f64) -> f64 {
    if x < PHI_SERIES_RADIUS {
        let x2 = x * x;
        PHI_SERIES.iter().rev().fold(0.0, |acc, d| acc * x2 + d)
    } else if x < 20.0 {
        let s = x.sinh();
        1.0 / (s * s) - 1.0 / (x * x)
    } else {
        // 1/sinh^2 = 4 e^(-2x) / (1 - e^(-2x))^2, without overflow.
        let e = (-2.0 * x).exp();
        4.0 * e / ((1.0 - e) * (1.0 - e)) - 1.0 / (x * x)
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::BadDegree("density needs degree n >= 1".into()));
    }
    Ok(())
}

/// `rho_n(t)`, the expected number of real roots per unit length at `t`.
pub fn density(n: usize, t: f64) -> Result<f64> {
    check_degree(n)?;
    if !t.is_finite() {
        return Err(Error::InvalidInput(format!("density at non-finite t = {t}")));
    }
    let t = t.abs();
    if t > 2.0 {
        // Invariance under t -> 1/t: rho(t) = rho(1/t) / t^2.
        return Ok(density_unit(n, 1.0 / t)? / (t * t));
    }
    density_unit(n, t)
}

fn density_unit(n: usize, t: f64) -> Result<f64> {
    let m = (n + 1) as f64;
    if t < 0.5 {
        if t == 0.0 {
            return Ok(FRAC_1_PI);
        }
        let t2 = t * t;
        let first = 1.0 / ((1.0 - t2) * (1.0 - t2));
        // m^2 t^(2n) / (1 - t^(2m))^2 in log space; underflows cleanly to 0.
        let lt = t.ln();
        let t2m = (2.0 * m * lt).exp();
        let second = (2.0 * m.ln() + 2.0 * n as f64 * lt - 2.0 * (-t2m).ln_1p()).exp();
        return radicand_to_density(first - second, first);
    }
    let h = t.ln().abs();
    let g = phi(h) - m * m * phi(m * h);
    let scale = (-h).exp() * 0.5;
    // For t < 1 the formula is in terms of |h| via the same t -> 1/t symmetry.
    let jac = if t < 1.0 { 1.0 / (t * t) } else { 1.0 };
    let r = radicand_to_density(g, m * m)?;
    Ok(r * scale * jac)
}

fn radicand_to_density(f: f64, size: f64) -> Result<f64> {
    if f < -1e-12 * size {
        return Err(Error::Domain(format!("negative density radicand {f}")));
    }
    Ok(FRAC_1_PI * f.max(0.0).sqrt())
}

/// Integration request for the density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityQuery {
    pub degree: usize,
    /// Lower end; may be `-inf`.
    pub a: f64,
    /// Upper end; may be `+inf`.
    pub b: f64,
    pub rel_tol: f64,
}

impl DensityQuery {
    pub fn new(degree: usize, a: f64, b: f64) -> Self {
        DensityQuery { degree, a, b, rel_tol: DEFAULT_REL_TOL }
    }

    /// The whole real line.
    pub fn full_line(degree: usize) -> Self {
        DensityQuery::new(degree, f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        check_degree(self.degree)?;
        if self.a.is_nan() || self.b.is_nan() || self.a > self.b {
            return Err(Error::InvalidInput(format!("bad interval [{}, {}]", self.a, self.b)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidInput(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        Ok(())
    }
}

/// Pieces of `[a, b]` expressed as integrals over subsets of `[0, 1]`:
/// `(lo, hi, weight)` meaning `weight * int_lo^hi rho`. Uses evenness and the
/// `t -> 1/t` invariance of `rho dt`.
fn unit_pieces(a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut pieces = Vec::new();
    // Map a piece [x, y] of the positive half-line into [0, 1].
    let mut positive = |x: f64, y: f64| {
        if x >= y {
            return;
        }
        let lo_in = x.min(1.0);
        let hi_in = y.min(1.0);
        if lo_in < hi_in {
            pieces.push((lo_in, hi_in));
        }
        let lo_out = x.max(1.0);
        if lo_out < y {
            // int_{lo}^{hi} rho(t) dt = int_{1/hi}^{1/lo} rho(u) du
            let u_lo = if y.is_infinite() { 0.0 } else { 1.0 / y };
            pieces.push((u_lo, 1.0 / lo_out));
        }
    };
    if b > 0.0 {
        positive(a.max(0.0), b);
    }
    if a < 0.0 {
        positive((-b).max(0.0), -a);
    }
    pieces
}

/// Expected number of real roots in `[a, b]` by adaptive quadrature. Every
/// query is folded onto `[0, 1]`: the integrand is `w(t) rho(t)`, where `w`
/// counts the pieces of [`unit_pieces`] covering `t` (the full line is
/// `4 * int_0^1 rho`). The tolerance applies to the total.
pub fn expected_roots(q: &DensityQuery) -> Result<QuadResult> {
    q.validate()?;
    let n = q.degree;
    let pieces = if q.a == f64::NEG_INFINITY && q.b == f64::INFINITY { vec![(0.0, 1.0); 4] } else { unit_pieces(q.a, q.b) };
    if pieces.is_empty() {
        return Ok(QuadResult { value: 0.0, err_est: 0.0, evaluations: 0 });
    }
    let mut breaks: Vec<f64> = pieces.iter().flat_map(|p| [p.0, p.1]).collect();
    // The density peaks in a window of width ~1/n below 1; seeding the
    // subdivision there saves many refinement rounds.
    let inv = 1.0 / n as f64;
    breaks.extend([64.0, 16.0, 4.0, 1.0].iter().map(|k| 1.0 - k * inv).filter(|x| *x > 0.0));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let weight = |t: f64| pieces.iter().filter(|p| p.0 <= t && t <= p.1).count() as f64;
    let lo = pieces.iter().map(|p| p.0).fold(1.0, f64::min);
    let hi = pieces.iter().map(|p| p.1).fold(0.0, f64::max);
    breaks.retain(|x| lo <= *x && *x <= hi);
    // Uncovered stretches have weight 0 and never need refinement.
    integrate_breaks(|t| Ok(weight(t) * density_unit(n, t)?), &breaks, q.rel_tol, MAX_SEGMENTS)
}

/// `(2/pi) ln n + C + 2/(pi n)`; the neglected terms are `O(1/n^2)`.
pub fn asymptotic_expectation(n: usize) -> f64 {
    let nf = n as f64;
    2.0 / PI * nf.ln() + KAC_CONSTANT + 2.0 / (PI * nf)
}

/// Upper bound `ln(C)/(2 pi) + 1` for the expected number of Gaussian roots in
/// `[0, 1 - 1/C)`.
pub fn edge_bound(c: f64) -> Result<f64> {
    if !(c > 1.0) || !c.is_finite() {
        return Err(Error::Domain(format!("edge bound needs finite C > 1, got {c}")));
    }
    Ok(c.ln() / (2.0 * PI) + 1.0)
}
