use super::descartes::{finite_ends, isolate_open, Isolated};
use super::range::{Bound, RootRange};
use crate::error::{Error, Result};
use crate::poly::{Dyadic, DyadicInterval, IntPolynomial};

const DEPTH_CAP: usize = 4000;

/// Isolating intervals for the distinct real roots of a polynomial in a range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootReport {
    /// Sorted, pairwise disjoint closed intervals, each holding exactly one
    /// distinct root. Degenerate intervals are exact dyadic roots.
    pub intervals: Vec<DyadicInterval>,
    /// True when `gcd(p, p')` is nonconstant, i.e. some complex root repeats.
    pub had_multiplicity: bool,
}

impl RootReport {
    pub fn count(&self) -> usize {
        self.intervals.len()
    }
}

/// A root bracket being refined: exactly one simple root of `s` in `(lo, hi)`.
struct Bracket {
    lo: Dyadic,
    hi: Dyadic,
    /// Sign of `s` immediately to the right of `lo`.
    s_lo: i32,
    exact: bool,
}

impl Bracket {
    fn open(s: &IntPolynomial, ds: &IntPolynomial, lo: Dyadic, hi: Dyadic) -> Self {
        let mut s_lo = s.sign_at(&lo);
        if s_lo == 0 {
            // lo is itself a (simple) root of s; the sign just right of it is sign s'(lo).
            s_lo = ds.sign_at(&lo);
        }
        Bracket { lo, hi, s_lo, exact: false }
    }

    fn point(x: Dyadic) -> Self {
        Bracket { lo: x.clone(), hi: x, s_lo: 0, exact: true }
    }

    fn bisect(&mut self, s: &IntPolynomial) {
        if self.exact {
            return;
        }
        let mid = Dyadic::midpoint(&self.lo, &self.hi);
        match s.sign_at(&mid) {
            0 => {
                self.lo = mid.clone();
                self.hi = mid;
                self.exact = true;
            }
            sm if sm == self.s_lo => self.lo = mid,
            _ => self.hi = mid,
        }
    }

    fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }
}

/// Isolates the distinct real roots of `p` in `range` and refines each
/// isolating interval by exact bisection to width at most `width`.
pub fn isolate_roots(p: &IntPolynomial, range: &RootRange, width: &Dyadic) -> Result<RootReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if width.signum() <= 0 {
        return Err(Error::InvalidInput(format!("isolation width must be positive, got {width}")));
    }
    let had_multiplicity = p.has_repeated_factor()?;
    let s = p.squarefree_part()?;
    if range.is_empty() || s.effective_degree() == Some(0) {
        return Ok(RootReport { intervals: Vec::new(), had_multiplicity });
    }
    let ds = s.derivative();
    let (lo, hi) = finite_ends(&s, range)?;

    let mut brackets = Vec::new();
    if let (Bound::Finite(a), true) = (&range.lo, range.lo_closed) {
        if s.sign_at(a) == 0 {
            brackets.push(Bracket::point(a.clone()));
        }
    }
    if lo < hi {
        for iso in isolate_open(&s, &lo, &hi, DEPTH_CAP)? {
            brackets.push(match iso {
                Isolated::Open(l, r) => Bracket::open(&s, &ds, l, r),
                Isolated::Exact(x) => Bracket::point(x),
            });
        }
    }
    if let (Bound::Finite(b), true) = (&range.hi, range.hi_closed) {
        if s.sign_at(b) == 0 && !(range.lo_closed && range.lo == range.hi) {
            brackets.push(Bracket::point(b.clone()));
        }
    }

    for b in brackets.iter_mut() {
        while b.width() > *width {
            b.bisect(&s);
        }
    }
    // Neighbours may still share an endpoint; shrink until strictly separated.
    loop {
        let mut touching = false;
        for i in 1..brackets.len() {
            if brackets[i - 1].hi >= brackets[i].lo {
                touching = true;
                let (left, right) = brackets.split_at_mut(i);
                left[i - 1].bisect(&s);
                right[0].bisect(&s);
            }
        }
        if !touching {
            break;
        }
    }
    let intervals = brackets.into_iter().map(|b| DyadicInterval::new(b.lo, b.hi)).collect();
    Ok(RootReport { intervals, had_multiplicity })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn sqrt_two() {
        let w = Dyadic::pow2(-20);
        let rep = isolate_roots(&p(&[-2, 0, 1]), &RootRange::half_open_f64(0.0, 2.0).unwrap(), &w).unwrap();
        assert_eq!(rep.count(), 1);
        let iv = &rep.intervals[0];
        assert!(iv.width() <= w);
        let q = p(&[-2, 0, 1]);
        assert_eq!(q.sign_at(&iv.lo) * q.sign_at(&iv.hi), -1);
        assert!(iv.lo.to_f64() < 2f64.sqrt() && 2f64.sqrt() < iv.hi.to_f64());
    }

    #[test]
    fn two_unit_roots() {
        let rep = isolate_roots(&p(&[-1, 0, 1]), &RootRange::half_open_f64(-2.0, 2.0).unwrap(), &Dyadic::pow2(-10))
            .unwrap();
        assert_eq!(rep.count(), 2);
        assert!(rep.intervals[0].contains(&Dyadic::from_int(-1)));
        assert!(rep.intervals[1].contains(&Dyadic::from_int(1)));
        assert!(!rep.had_multiplicity);
    }

    #[test]
    fn multiplicity_is_flagged() {
        let rep = isolate_roots(&p(&[1, 1, -1, -1]), &RootRange::real_line(), &Dyadic::pow2(-8)).unwrap();
        assert_eq!(rep.count(), 2);
        assert!(rep.had_multiplicity);
    }

    #[test]
    fn touching_intervals_are_separated() {
        // Roots at 1/4 and at the first bisection point 0 of (-1, 1), plus -1/4.
        let q = p(&[0, -1, 0, 16]);
        let rep = isolate_roots(&q, &RootRange::open(Dyadic::from_int(-1), Dyadic::from_int(1)).unwrap(), &Dyadic::from_int(1))
            .unwrap();
        assert_eq!(rep.count(), 3);
        for w in rep.intervals.windows(2) {
            assert!(w[0].hi < w[1].lo);
        }
    }
}
