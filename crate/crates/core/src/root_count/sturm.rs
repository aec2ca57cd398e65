//! Sturm chains built from sign-corrected primitive pseudo-remainders.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::range::{Bound, RootRange};
use crate::error::{Error, Result};
use crate::poly::{content, pseudo_remainder_positive, Dyadic, IntPolynomial};

/// Signed remainder sequence `p, p', -rem(p, p'), ...` with each element
/// divided by its (positive) content.
#[derive(Clone, Debug)]
pub struct SturmChain {
    polys: Vec<IntPolynomial>,
}

fn reduce_positive(p: &IntPolynomial) -> IntPolynomial {
    let t = p.trimmed();
    let g = content(&t);
    if g.is_zero() {
        return t;
    }
    IntPolynomial::new(t.coeffs().iter().map(|c| c / &g).collect(), 0)
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let p0 = reduce_positive(p);
        let mut polys = vec![p0.clone()];
        if p0.effective_degree() == Some(0) {
            return Ok(SturmChain { polys });
        }
        polys.push(reduce_positive(&p0.derivative()));
        loop {
            let n = polys.len();
            if polys[n - 1].effective_degree() == Some(0) {
                break;
            }
            // rem is a positive multiple of the Euclidean remainder; negate it.
            let r = pseudo_remainder_positive(&polys[n - 2], &polys[n - 1])?;
            if r.is_zero() {
                break;
            }
            polys.push(reduce_positive(&-&r));
        }
        Ok(SturmChain { polys })
    }

    pub fn polys(&self) -> &[IntPolynomial] {
        &self.polys
    }

    /// Sign variations at a finite point, zeros dropped.
    pub fn variations_at(&self, x: &Dyadic) -> usize {
        count_variations(self.polys.iter().map(|p| p.sign_at(x)))
    }

    /// Sign variations at `+inf` (`positive = true`) or `-inf`.
    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        count_variations(self.polys.iter().map(|p| {
            let d = p.effective_degree().unwrap_or(0);
            let s = sign(p.leading_coeff().expect("chain elements are nonzero"));
            if positive || d % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    fn variations(&self, b: &Bound) -> usize {
        match b {
            Bound::NegInf => self.variations_at_infinity(false),
            Bound::PosInf => self.variations_at_infinity(true),
            Bound::Finite(x) => self.variations_at(x),
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

pub(crate) fn count_variations<I: IntoIterator<Item = i32>>(signs: I) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Sturm chain of `p` (primitive part of `p`, then `p'`, ...).
pub fn sturm_chain(p: &IntPolynomial) -> Result<SturmChain> {
    SturmChain::new(p)
}

/// Exact number of distinct real roots of `p` in `range`.
pub fn count_roots(p: &IntPolynomial, range: &RootRange) -> Result<usize> {
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
    let chain = SturmChain::new(&s)?;
    // For squarefree s, V(a) - V(b) counts roots in (a, b].
    let va = chain.variations(&range.lo);
    let vb = chain.variations(&range.hi);
    let mut count = va as i64 - vb as i64;
    if let (Bound::Finite(b), false) = (&range.hi, range.hi_closed) {
        if s.sign_at(b) == 0 {
            count -= 1;
        }
    }
    if let (Bound::Finite(a), true) = (&range.lo, range.lo_closed) {
        if s.sign_at(a) == 0 {
            count += 1;
        }
    }
    if count < 0 {
        return Err(Error::Internal(format!("negative Sturm count {count}")));
    }
    Ok(count as usize)
}
