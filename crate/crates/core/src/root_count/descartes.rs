//! Descartes / Vincent–Collins–Akritas bisection.
//!
//! A polynomial on an interval `(lo, hi)` is carried as `Q(x)` on `(0, 1)`.
//! The Möbius-transformed polynomial `(1 + x)^d Q(1 / (1 + x))` has a number of
//! coefficient sign variations that bounds the root count in `(0, 1)` from
//! above with the same parity, so 0 and 1 are exact answers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::range::{Bound, RootRange};
use super::sturm::count_variations;
use crate::error::{Error, Result};
use crate::poly::{content, Dyadic, IntPolynomial};

/// Bisection depth beyond which a branch is considered non-terminating.
pub(crate) const DEPTH_CAP: usize = 4000;

/// Result of isolating a single root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Isolated {
    /// Exactly one simple root strictly inside `(lo, hi)`.
    Open(Dyadic, Dyadic),
    /// A root exactly at a dyadic point.
    Exact(Dyadic),
}

/// `c(x) <- c(x + a)` in place.
pub(crate) fn taylor_shift(c: &mut [BigInt], a: &BigInt) {
    let n = c.len();
    if n < 2 || a.is_zero() {
        return;
    }
    let unit = a.is_one();
    for i in 0..n - 1 {
        for j in (i..n - 1).rev() {
            if unit {
                let t = c[j + 1].clone();
                c[j] += t;
            } else {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
    }
}

fn sign(c: &BigInt) -> i32 {
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

fn descartes_bound(q: &[BigInt]) -> usize {
    let mut t: Vec<BigInt> = q.iter().rev().cloned().collect();
    taylor_shift(&mut t, &BigInt::one());
    count_variations(t.iter().map(sign))
}

fn trim(mut q: Vec<BigInt>) -> Vec<BigInt> {
    while q.len() > 1 && q.last().map(|c| c.is_zero()).unwrap_or(false) {
        q.pop();
    }
    q
}

fn remove_content(q: &mut [BigInt]) {
    let g = content(&IntPolynomial::new(q.to_vec(), 0));
    if g > BigInt::one() {
        for c in q.iter_mut() {
            *c /= &g;
        }
    }
}

/// `Q(x)` such that roots of `p` in `(l, r)` correspond to roots of `Q` in `(0, 1)`.
fn to_unit_interval(p: &IntPolynomial, l: &Dyadic, r: &Dyadic) -> Vec<BigInt> {
    let t = p.trimmed();
    let d = t.formal_degree();
    let w = r.sub(l);
    let k = 0i64.max(-l.exponent()).max(-w.exponent()) as usize;
    let a: BigInt = l.mantissa() << (l.exponent() + k as i64) as usize;
    let wi: BigInt = w.mantissa() << (w.exponent() + k as i64) as usize;
    let mut q: Vec<BigInt> = t
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c << (k * (d - i)))
        .collect();
    taylor_shift(&mut q, &a);
    let mut pw = BigInt::one();
    for c in q.iter_mut() {
        *c *= &pw;
        pw *= &wi;
    }
    remove_content(&mut q);
    q
}

struct Vca<'a> {
    out: &'a mut Vec<Isolated>,
    cap: usize,
}

impl Vca<'_> {
    fn run(&mut self, q: Vec<BigInt>, lo: Dyadic, hi: Dyadic, depth: usize) -> Result<()> {
        let q = trim(q);
        if q.len() <= 1 {
            return Ok(());
        }
        match descartes_bound(&q) {
            0 => return Ok(()),
            1 => {
                self.out.push(Isolated::Open(lo, hi));
                return Ok(());
            }
            _ => {}
        }
        if depth >= self.cap {
            return Err(Error::Internal(format!(
                "Descartes bisection exceeded depth {} near [{lo}, {hi}]",
                self.cap
            )));
        }
        let d = q.len() - 1;
        let mid = Dyadic::midpoint(&lo, &hi);
        // Left half: 2^d Q(x/2).
        let mut left: Vec<BigInt> = q.iter().enumerate().map(|(i, c)| c << (d - i)).collect();
        // Right half: left(x + 1).
        let mut right = left.clone();
        taylor_shift(&mut right, &BigInt::one());
        remove_content(&mut left);
        self.run(left, lo, mid.clone(), depth + 1)?;
        if right[0].is_zero() {
            self.out.push(Isolated::Exact(mid.clone()));
            right.remove(0);
        }
        remove_content(&mut right);
        self.run(right, mid, hi, depth + 1)
    }
}

/// Isolates the distinct roots of the squarefree polynomial `s` in the open
/// interval `(l, r)`, sorted left to right.
pub(crate) fn isolate_open(s: &IntPolynomial, l: &Dyadic, r: &Dyadic, cap: usize) -> Result<Vec<Isolated>> {
    let mut out = Vec::new();
    if l >= r || s.effective_degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    let q = to_unit_interval(s, l, r);
    Vca { out: &mut out, cap }.run(q, l.clone(), r.clone(), 0)?;
    Ok(out)
}

/// Finite bounds covering `range` for the real roots of `p`.
pub(crate) fn finite_ends(p: &IntPolynomial, range: &RootRange) -> Result<(Dyadic, Dyadic)> {
    let k = p.root_bound_log2()?;
    let lo = match &range.lo {
        Bound::Finite(a) => a.clone(),
        _ => Dyadic::pow2(k).neg(),
    };
    let hi = match &range.hi {
        Bound::Finite(b) => b.clone(),
        _ => Dyadic::pow2(k),
    };
    Ok((lo, hi))
}

/// Exact number of distinct real roots of `p` in `range`, by Descartes bisection
/// on the squarefree part.
pub fn count_roots_descartes(p: &IntPolynomial, range: &RootRange) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if range.is_empty() {
        return Ok(0);
    }
    let s = p.squarefree_part()?;
    if s.effective_degree() == Some(0) {
        return Ok(0);
    }
    let (lo, hi) = finite_ends(&s, range)?;
    let mut count = if lo < hi { isolate_open(&s, &lo, &hi, DEPTH_CAP)?.len() } else { 0 };
    if let (Bound::Finite(a), true) = (&range.lo, range.lo_closed) {
        if s.sign_at(a) == 0 {
            count += 1;
        }
    }
    if let (Bound::Finite(b), true) = (&range.hi, range.hi_closed) {
        if s.sign_at(b) == 0 && !(range.lo_closed && range.lo == range.hi) {
            count += 1;
        }
    }
    Ok(count)
}
