//! Exact polynomials with arbitrary-precision integer coefficients.
//!
//! An [`IntPolynomial`] stores integer coefficients together with a shared
//! dyadic scale: the mathematical polynomial is `2^-scale_exp * sum c_i x^i`.
//! The scale never affects the root set, so every counting routine ignores it.

mod dyadic;
mod gcd;

pub use dyadic::{ldexp, Dyadic, DyadicInterval};
pub use gcd::{content, gcd, primitive_part, pseudo_remainder_positive};

use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
    scale_exp: i64,
}

impl IntPolynomial {
    /// Coefficients in increasing degree order; trailing zeros are kept.
    pub fn new(coeffs: Vec<BigInt>, scale_exp: i64) -> Self {
        let coeffs = if coeffs.is_empty() { vec![BigInt::zero()] } else { coeffs };
        IntPolynomial { coeffs, scale_exp }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), 0)
    }

    pub fn zero() -> Self {
        IntPolynomial::new(vec![BigInt::zero()], 0)
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPolynomial::new(coeffs, 0)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn scale_exp(&self) -> i64 {
        self.scale_exp
    }

    pub fn with_scale_exp(mut self, scale_exp: i64) -> Self {
        self.scale_exp = scale_exp;
        self
    }

    pub fn formal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest index with a nonzero coefficient; `None` for the zero polynomial.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.effective_degree().is_none()
    }

    /// Leading coefficient with respect to the effective degree.
    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.effective_degree().map(|d| &self.coeffs[d])
    }

    /// Drops trailing zero coefficients (keeps a single zero for the zero polynomial).
    pub fn trimmed(&self) -> Self {
        let d = self.effective_degree().unwrap_or(0);
        IntPolynomial::new(self.coeffs[..=d].to_vec(), self.scale_exp)
    }

    /// Exact value of the unscaled integer part `sum c_i q^i`.
    pub fn eval_exact(&self, q: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Exact value of the unscaled integer part at a dyadic point.
    pub fn eval_dyadic(&self, x: &Dyadic) -> Dyadic {
        let d = match self.effective_degree() {
            Some(d) => d,
            None => return Dyadic::zero(),
        };
        let e = x.exponent();
        let m = x.mantissa();
        if e >= 0 {
            let xi: BigInt = m << e as usize;
            let mut acc = BigInt::zero();
            for c in self.coeffs[..=d].iter().rev() {
                acc = acc * &xi + c;
            }
            return Dyadic::from_int(acc);
        }
        // 2^(k d) P(m / 2^k) = sum c_i m^i 2^(k (d - i))
        let k = (-e) as usize;
        let mut acc = self.coeffs[d].clone();
        for (steps, c) in self.coeffs[..d].iter().rev().enumerate() {
            acc = acc * m;
            if !c.is_zero() {
                acc += c << (k * (steps + 1));
            }
        }
        Dyadic::new(acc, -((k * d) as i64))
    }

    /// Exact sign of the polynomial at a dyadic point: -1, 0 or 1.
    pub fn sign_at(&self, x: &Dyadic) -> i32 {
        self.eval_dyadic(x).signum()
    }

    /// Floating Horner evaluation of the mathematical (scaled) polynomial.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        ldexp(acc, -self.scale_exp)
    }

    /// Exact formal derivative; the scale is preserved.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return IntPolynomial::new(vec![BigInt::zero()], self.scale_exp);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        IntPolynomial::new(coeffs, self.scale_exp)
    }

    /// Primitive `p / gcd(p, p')` with positive leading coefficient.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = primitive_part(&self.trimmed());
        if p.effective_degree() == Some(0) {
            return Ok(IntPolynomial::from_i64s(&[1]));
        }
        let g = gcd(&p, &p.derivative())?;
        let q = p.div_exact(&g)?;
        Ok(primitive_part(&q))
    }

    /// Whether `gcd(p, p')` is nonconstant, i.e. `p` has a repeated complex root.
    pub fn has_repeated_factor(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p = self.trimmed();
        if p.formal_degree() == 0 {
            return Ok(false);
        }
        Ok(gcd(&p, &p.derivative())?.formal_degree() > 0)
    }

    /// Exact division by a divisor known to divide `self` over the integers.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Result<Self> {
        let b = divisor.trimmed();
        let db = b.effective_degree().ok_or(Error::ZeroPolynomial)?;
        let mut r: Vec<BigInt> = self.trimmed().coeffs;
        if r.len() - 1 < db {
            if r.iter().all(|c| c.is_zero()) {
                return Ok(IntPolynomial::zero().with_scale_exp(self.scale_exp));
            }
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        let lb = &b.coeffs[db];
        let mut q = vec![BigInt::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let lead = &r[k + db];
            if lead.is_zero() {
                continue;
            }
            let (t, rem) = lead.div_rem(lb);
            if !rem.is_zero() {
                return Err(Error::Internal("inexact polynomial division".into()));
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[k + j] -= &t * bc;
            }
            q[k] = t;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(IntPolynomial::new(q, self.scale_exp))
    }

    /// `x^d p(1/x)` with `d` the effective degree.
    pub fn reversed(&self) -> Self {
        let t = self.trimmed();
        let mut coeffs = t.coeffs;
        coeffs.reverse();
        IntPolynomial::new(coeffs, self.scale_exp)
    }

    /// `p(-x)`.
    pub fn reflected(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
            .collect();
        IntPolynomial::new(coeffs, self.scale_exp)
    }

    /// Multiplies every coefficient by `k` (the scale is untouched).
    pub fn scaled(&self, k: &BigInt) -> Self {
        IntPolynomial::new(self.coeffs.iter().map(|c| c * k).collect(), self.scale_exp)
    }

    /// Schoolbook product of the integer parts; scales add.
    pub fn mul(&self, other: &IntPolynomial) -> Self {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out, self.scale_exp + other.scale_exp)
    }

    /// Maximum bit length of the coefficients.
    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    /// Cauchy bound: every real root lies strictly inside `(-2^k, 2^k)`.
    pub fn root_bound_log2(&self) -> Result<i64> {
        let d = self.effective_degree().ok_or(Error::ZeroPolynomial)?;
        let lc = self.coeffs[d].abs();
        let max = self.coeffs[..d].iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero);
        // 1 + max/|lc| < 2^k  <=  k = bits(max / lc + 1) + 1
        let ratio: BigInt = max / lc + BigInt::one();
        Ok(ratio.bits() as i64 + 1)
    }
}

fn combine(a: &IntPolynomial, b: &IntPolynomial, negate_b: bool) -> IntPolynomial {
    // Align scales so the sum is exact.
    let s = a.scale_exp.max(b.scale_exp);
    let sa = (s - a.scale_exp) as usize;
    let sb = (s - b.scale_exp) as usize;
    let n = a.coeffs.len().max(b.coeffs.len());
    let zero = BigInt::zero();
    let coeffs = (0..n)
        .map(|i| {
            let x = a.coeffs.get(i).unwrap_or(&zero) << sa;
            let y = b.coeffs.get(i).unwrap_or(&zero) << sb;
            if negate_b {
                x - y
            } else {
                x + y
            }
        })
        .collect();
    IntPolynomial::new(coeffs, s)
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        combine(self, rhs, false)
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        combine(self, rhs, true)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect(), self.scale_exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn eval_examples() {
        let p = IntPolynomial::from_i64s(&[-1, 0, 1]);
        assert_eq!(p.eval_exact(&q(2, 1)), q(3, 1));
        assert_eq!(p.eval_exact(&q(1, 1)), q(0, 1));
        let r = IntPolynomial::from_i64s(&[1, 1, -1, -1]);
        assert_eq!(r.eval_exact(&q(-1, 1)), q(0, 1));
    }

    #[test]
    fn factorization_oracle_for_cubic() {
        // (1+x)^2 (1-x) expanded by multiplication.
        let one_plus = IntPolynomial::from_i64s(&[1, 1]);
        let one_minus = IntPolynomial::from_i64s(&[1, -1]);
        let prod = one_plus.mul(&one_plus).mul(&one_minus);
        assert_eq!(prod, IntPolynomial::from_i64s(&[1, 1, -1, -1]));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(
            IntPolynomial::from_i64s(&[-1, 0, 1]).derivative(),
            IntPolynomial::from_i64s(&[0, 2])
        );
        assert!(IntPolynomial::from_i64s(&[5]).derivative().is_zero());
        assert_eq!(
            IntPolynomial::from_i64s(&[1, 1, -1, -1]).derivative(),
            IntPolynomial::from_i64s(&[1, -2, -3])
        );
    }

    #[test]
    fn derivative_keeps_scale() {
        let p = IntPolynomial::from_i64s(&[3, 4, 5]).with_scale_exp(53);
        assert_eq!(p.derivative().scale_exp(), 53);
    }

    #[test]
    fn squarefree_examples() {
        let p = IntPolynomial::from_i64s(&[1, 1, -1, -1]);
        let s = p.squarefree_part().unwrap();
        // Primitive multiple of 1 - x^2 with positive leading coefficient.
        assert_eq!(s, IntPolynomial::from_i64s(&[-1, 0, 1]));
        assert_eq!(
            IntPolynomial::from_i64s(&[-1, 0, 1]).squarefree_part().unwrap(),
            IntPolynomial::from_i64s(&[-1, 0, 1])
        );
        assert_eq!(
            IntPolynomial::from_i64s(&[0, 0, 1]).squarefree_part().unwrap(),
            IntPolynomial::from_i64s(&[0, 1])
        );
        assert_eq!(IntPolynomial::zero().squarefree_part(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn squarefree_ignores_scale_and_content() {
        let p = IntPolynomial::from_i64s(&[6, 6, -6, -6]).with_scale_exp(7);
        assert_eq!(
            p.squarefree_part().unwrap().coeffs(),
            IntPolynomial::from_i64s(&[-1, 0, 1]).coeffs()
        );
    }

    #[test]
    fn degrees() {
        let p = IntPolynomial::from_i64s(&[1, 2, 0, 0]);
        assert_eq!(p.formal_degree(), 3);
        assert_eq!(p.effective_degree(), Some(1));
        assert_eq!(IntPolynomial::from_i64s(&[0, 0]).effective_degree(), None);
        assert_eq!(p.reversed(), IntPolynomial::from_i64s(&[2, 1]));
    }

    #[test]
    fn dyadic_eval_matches_rational() {
        let p = IntPolynomial::from_i64s(&[3, -7, 0, 2, -1]);
        for &x in &[0.5, -1.25, 0.8, 3.0, -0.0078125, 0.0] {
            let d = Dyadic::from_f64(x).unwrap();
            assert_eq!(p.eval_dyadic(&d).to_rational(), p.eval_exact(&d.to_rational()));
        }
    }

    #[test]
    fn root_bound_contains_roots() {
        let p = IntPolynomial::from_i64s(&[-100, 0, 1]);
        let k = p.root_bound_log2().unwrap();
        assert!(2f64.powi(k as i32) > 10.0);
    }

    fn naive_eval(c: &[i64], x: &BigRational) -> BigRational {
        let mut sum = BigRational::zero();
        for (i, &ci) in c.iter().enumerate() {
            let mut pw = BigRational::one();
            for _ in 0..i {
                pw *= x;
            }
            sum += BigRational::from_integer(ci.into()) * pw;
        }
        sum
    }

    proptest! {
        #[test]
        fn eval_matches_power_expansion(
            c in prop::collection::vec(-1000i64..1000, 1..=11),
            num in -50i64..50,
            den in 1i64..30,
        ) {
            let p = IntPolynomial::from_i64s(&c);
            let x = q(num, den);
            prop_assert_eq!(p.eval_exact(&x), naive_eval(&c, &x));
        }

        #[test]
        fn derivative_is_linear(
            a in prop::collection::vec(-50i64..50, 1..=10),
            b in prop::collection::vec(-50i64..50, 1..=10),
        ) {
            let pa = IntPolynomial::from_i64s(&a);
            let pb = IntPolynomial::from_i64s(&b);
            let lhs = (&pa + &pb).derivative().trimmed();
            let rhs = (&pa.derivative() + &pb.derivative()).trimmed();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn squarefree_part_is_coprime_to_derivative(
            roots in prop::collection::vec(-4i64..4, 1..6),
            extra in prop::collection::vec(-5i64..5, 1..4),
        ) {
            // Product of linear factors (with likely repeats) times a random factor.
            let mut p = IntPolynomial::from_i64s(&extra);
            prop_assume!(!p.is_zero());
            for r in roots {
                p = p.mul(&IntPolynomial::from_i64s(&[-r, 1]));
            }
            let s = p.squarefree_part().unwrap();
            if s.effective_degree().unwrap() > 0 {
                let g = gcd(&s, &s.derivative()).unwrap();
                prop_assert_eq!(g.effective_degree(), Some(0));
            }
        }
    }
}
