//! Content, primitive parts, pseudo-division and the primitive remainder
//! sequence gcd over `Z[x]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntPolynomial;
use crate::error::{Error, Result};

/// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
pub fn content(p: &IntPolynomial) -> BigInt {
    let mut g = BigInt::zero();
    for c in p.coeffs() {
        if c.is_zero() {
            continue;
        }
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// `p / content(p)`, trimmed, with positive leading coefficient. Scale is reset to 0.
pub fn primitive_part(p: &IntPolynomial) -> IntPolynomial {
    let t = p.trimmed();
    let g = content(&t);
    if g.is_zero() {
        return IntPolynomial::zero();
    }
    let negate = t.leading_coeff().map(|c| c.is_negative()).unwrap_or(false);
    let g = if negate { -g } else { g };
    IntPolynomial::new(t.coeffs().iter().map(|c| c / &g).collect(), 0)
}

/// Pseudo-remainder with a positive multiplier: returns `r` with
/// `|lc(b)|^e * a = q * b + r`, `deg r < deg b`, so `r` is a positive multiple of
/// the Euclidean remainder of `a` by `b` over the rationals.
pub fn pseudo_remainder_positive(a: &IntPolynomial, b: &IntPolynomial) -> Result<IntPolynomial> {
    let b = b.trimmed();
    let db = b.effective_degree().ok_or(Error::ZeroPolynomial)?;
    let lb = b.coeffs()[db].clone();
    let lb_abs = lb.abs();
    let lb_neg = lb.is_negative();
    let mut r: Vec<BigInt> = a.trimmed().coeffs().to_vec();
    loop {
        let dr = match r.iter().rposition(|c| !c.is_zero()) {
            Some(d) if d >= db => d,
            _ => break,
        };
        // r <- |lb| r - sign(lb) lc(r) x^(dr-db) b
        let lr = r[dr].clone();
        let factor = if lb_neg { -lr } else { lr };
        for c in r.iter_mut() {
            *c *= &lb_abs;
        }
        let shift = dr - db;
        for (j, bc) in b.coeffs().iter().enumerate() {
            r[shift + j] -= &factor * bc;
        }
        debug_assert!(r[dr].is_zero());
        r.truncate(dr.max(1));
    }
    Ok(IntPolynomial::new(r, 0).trimmed())
}

/// Primitive gcd of two integer polynomials, positive leading coefficient.
pub fn gcd(a: &IntPolynomial, b: &IntPolynomial) -> Result<IntPolynomial> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if b.is_zero() {
        return Ok(primitive_part(a));
    }
    if a.is_zero() {
        return Ok(primitive_part(b));
    }
    let (mut x, mut y) = (primitive_part(a), primitive_part(b));
    if x.effective_degree() < y.effective_degree() {
        std::mem::swap(&mut x, &mut y);
    }
    if coprime_modular(&x, &y) {
        return Ok(IntPolynomial::from_i64s(&[1]));
    }
    loop {
        if y.effective_degree() == Some(0) {
            return Ok(IntPolynomial::from_i64s(&[1]));
        }
        let r = pseudo_remainder_positive(&x, &y)?;
        if r.is_zero() {
            return Ok(y);
        }
        x = y;
        y = primitive_part(&r);
    }
}

/// Primes below 2^31, so products of residues fit in a `u64`.
const PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// Cheap sufficient test for `gcd(a, b) = 1`: if `p` divides neither leading
/// coefficient, the true gcd reduces to a divisor of `gcd(a mod p, b mod p)`
/// of the same degree, so a constant modular gcd proves coprimality.
fn coprime_modular(a: &IntPolynomial, b: &IntPolynomial) -> bool {
    let (a, b) = (a.trimmed(), b.trimmed());
    PRIMES.iter().any(|&p| {
        let reduce = |q: &IntPolynomial| -> Vec<u64> {
            let m = BigInt::from(p);
            q.coeffs().iter().map(|c| c.mod_floor(&m).to_u64().expect("residue fits")).collect()
        };
        let (ra, rb) = (reduce(&a), reduce(&b));
        if ra.last() == Some(&0) || rb.last() == Some(&0) {
            return false;
        }
        gcd_mod_degree(ra, rb, p) == 0
    })
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Degree of `gcd(a, b)` over `Z/p`; inputs have nonzero leading terms.
fn gcd_mod_degree(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.len() > 1 && *v.last().expect("nonempty") == 0 {
            v.pop();
        }
    };
    loop {
        trim(&mut a);
        trim(&mut b);
        if b.len() == 1 {
            return if b[0] == 0 { a.len() - 1 } else { 0 };
        }
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // a <- a mod b
        let inv = pow_mod(*b.last().expect("nonempty"), p - 2, p);
        let db = b.len() - 1;
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let k = a.len() - 1 - db;
            let t = a[a.len() - 1] * inv % p;
            for (j, &bc) in b.iter().enumerate() {
                a[k + j] = (a[k + j] + p - t * bc % p) % p;
            }
            a.pop();
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
}
