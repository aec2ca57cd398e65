use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Dyadic;

/// One end of a counting range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    NegInf,
    PosInf,
    Finite(Dyadic),
}

impl Bound {
    pub fn finite(&self) -> Option<&Dyadic> {
        match self {
            Bound::Finite(d) => Some(d),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Bound::NegInf => f64::NEG_INFINITY,
            Bound::PosInf => f64::INFINITY,
            Bound::Finite(d) => d.to_f64(),
        }
    }
}

/// A real interval with per-end closedness. Infinite ends are always open.
///
/// The default counting convention is half-open `(a, b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootRange {
    pub lo: Bound,
    pub hi: Bound,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl RootRange {
    pub fn new(lo: Bound, hi: Bound, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        let lo_closed = lo_closed && matches!(lo, Bound::Finite(_));
        let hi_closed = hi_closed && matches!(hi, Bound::Finite(_));
        match (&lo, &hi) {
            (Bound::PosInf, _) | (_, Bound::NegInf) => {
                return Err(Error::InvalidInput("range bounds out of order".into()))
            }
            (Bound::Finite(a), Bound::Finite(b)) if a > b => {
                return Err(Error::InvalidInput(format!("range lower end {a} exceeds upper end {b}")))
            }
            _ => {}
        }
        Ok(RootRange { lo, hi, lo_closed, hi_closed })
    }

    pub fn real_line() -> Self {
        RootRange { lo: Bound::NegInf, hi: Bound::PosInf, lo_closed: false, hi_closed: false }
    }

    /// `(a, b]`
    pub fn half_open(a: Dyadic, b: Dyadic) -> Result<Self> {
        RootRange::new(Bound::Finite(a), Bound::Finite(b), false, true)
    }

    pub fn open(a: Dyadic, b: Dyadic) -> Result<Self> {
        RootRange::new(Bound::Finite(a), Bound::Finite(b), false, false)
    }

    pub fn closed(a: Dyadic, b: Dyadic) -> Result<Self> {
        RootRange::new(Bound::Finite(a), Bound::Finite(b), true, true)
    }

    /// Builds a range from `f64` ends (`±inf` allowed) with explicit closedness.
    pub fn from_f64(a: f64, b: f64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        let conv = |x: f64| -> Result<Bound> {
            if x == f64::NEG_INFINITY {
                Ok(Bound::NegInf)
            } else if x == f64::INFINITY {
                Ok(Bound::PosInf)
            } else {
                Dyadic::from_f64(x)
                    .map(Bound::Finite)
                    .ok_or_else(|| Error::InvalidInput(format!("non-finite range end {x}")))
            }
        };
        RootRange::new(conv(a)?, conv(b)?, lo_closed, hi_closed)
    }

    /// `(a, b]` from `f64` ends.
    pub fn half_open_f64(a: f64, b: f64) -> Result<Self> {
        RootRange::from_f64(a, b, false, true)
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        let above = match &self.lo {
            Bound::NegInf => true,
            Bound::PosInf => false,
            Bound::Finite(a) => {
                if self.lo_closed {
                    a <= x
                } else {
                    a < x
                }
            }
        };
        let below = match &self.hi {
            Bound::PosInf => true,
            Bound::NegInf => false,
            Bound::Finite(b) => {
                if self.hi_closed {
                    x <= b
                } else {
                    x < b
                }
            }
        };
        above && below
    }

    /// True when the range holds no real number at all.
    pub fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Bound::Finite(a), Bound::Finite(b)) => a > b || (a == b && !(self.lo_closed && self.hi_closed)),
            _ => false,
        }
    }
}

impl fmt::Display for RootRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_closed { '[' } else { '(' };
        let r = if self.hi_closed { ']' } else { ')' };
        write!(f, "{l}{}, {}{r}", self.lo.to_f64(), self.hi.to_f64())
    }
}
