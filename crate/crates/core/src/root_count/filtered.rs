//! Certified floating-point root isolation with exact fallback.
//!
//! Monte Carlo runs count roots of thousands of polynomials of degree up to a
//! few thousand, where pure big-integer bisection is far too slow. This module
//! does the bulk of the work in `f64` while keeping every answer exact:
//!
//! 1. Roots at `0` and `±1` are divided out exactly; what remains, `R`, has no
//!    root at `0, ±1`. Roots of `R` in `(-1, 1)` are found directly, roots
//!    outside through the reversed polynomial `x^d R(1/x)` on `(-1, 1)`.
//! 2. `(-1, 1)` is covered by Taylor models of order [`ORDER`] whose rounding
//!    and truncation errors are bounded rigorously (standard `gamma_k`
//!    bounds for Horner-type recurrences plus a binomial tail bound).
//! 3. Inside a model, subintervals are either excluded (`|P| > 0`), or
//!    certified monotone (`|P'| > 0`, so at most one root, decided by endpoint
//!    signs), or split. When floating error is what blocks a decision, the
//!    subinterval is handed to the exact Descartes isolator.
//!
//! The resulting brackets are exact dyadic intervals with one simple root each,
//! so counts on any range and refinement to any width are exact.

use std::cmp::Ordering;

use num_traits::ToPrimitive;

use super::descartes::{finite_ends, isolate_open, Isolated, DEPTH_CAP};
use super::range::{Bound, RootRange};
use super::sturm::count_roots;
use crate::error::{Error, Result};
use crate::poly::{gcd, Dyadic, DyadicInterval, IntPolynomial};

/// Taylor model order.
const ORDER: usize = 16;
const N: usize = ORDER + 1;
/// Intervals narrower than this go straight to the exact isolator; it keeps
/// every bisection point exactly representable in `f64`.
const MIN_WIDTH: f64 = 1.0 / (1u64 << 45) as f64;
/// Local bisection depth (relative to the model radius) before a fresh model is built.
const LOCAL_SHRINK: f64 = 4096.0;
/// A model is only built where its truncation error is this small relative to
/// the root-mean-square size of the terms.
const TRUNCATION_RATIO: f64 = 1e-3;
/// Absolute slack covering gradual underflow in the error sums.
const TINY: f64 = 1e-280;
/// Coefficient size limit for the floating path.
const MAX_FLOAT_BITS: u64 = 400;
const BRANCH_CAP: usize = 64;

fn gamma(m: usize) -> f64 {
    let mu = m as f64 * (f64::EPSILON / 2.0);
    mu / (1.0 - mu)
}

fn signum(v: f64) -> i32 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Rounded coefficients plus their absolute values.
struct FloatPoly {
    a: Vec<f64>,
    abs: Vec<f64>,
    horner_gamma: f64,
}

impl FloatPoly {
    fn new(p: &IntPolynomial) -> Option<Self> {
        if p.max_coeff_bits() > MAX_FLOAT_BITS {
            return None;
        }
        let a: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64()).collect::<Option<_>>()?;
        let abs = a.iter().map(|v| v.abs()).collect();
        // +4 covers the rounding of the integer coefficients to f64.
        let horner_gamma = gamma(2 * a.len() + 4);
        Some(FloatPoly { a, abs, horner_gamma })
    }

    fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// Sign of the exact polynomial at `x` if the Horner error bound allows it.
    fn certified_sign(&self, x: f64) -> Option<i32> {
        let ax = x.abs();
        let mut v = 0.0;
        let mut s = 0.0;
        for (c, ac) in self.a.iter().zip(&self.abs).rev() {
            v = v * x + c;
            s = s * ax + ac;
        }
        let err = self.horner_gamma * s * (1.0 + 1e-10) + TINY;
        if v.abs() > err {
            Some(signum(v))
        } else {
            None
        }
    }

    /// Truncation bound of an order-`ORDER` model on `[c - h, c + h]` and the
    /// root-mean-square size `sqrt(sum a_i^2 c^(2i))`.
    fn truncation(&self, c: f64, h: f64) -> (f64, f64) {
        let c2 = c * c;
        let mut ms = 0.0;
        for v in self.a.iter().rev() {
            ms = ms * c2 + v * v;
        }
        let d = self.degree();
        if d <= ORDER {
            return (0.0, ms.sqrt());
        }
        // sum_i |a_i| C(i, K+1) rho^(i-K-1) h^(K+1) bounds the tail of the
        // Taylor series at every point of the interval.
        let rho = c.abs() + h;
        let mut w = 1.0;
        let mut sum = 0.0;
        for i in N..=d {
            sum += self.abs[i] * w;
            w *= (i + 1) as f64 / (i - ORDER) as f64 * rho;
        }
        let e = sum * h.powi(N as i32) * (1.0 + 1e-9);
        (if e.is_finite() { e } else { f64::INFINITY }, ms.sqrt())
    }
}

/// Order-`ORDER` Taylor model `M(x) = sum t_j (x - c)^j` with `|P - M| <= e0`
/// and `|P' - M'| <= e1` on `[c - h, c + h]`.
struct Model {
    c: f64,
    h: f64,
    t: [f64; N],
    e0: f64,
    e1: f64,
    e_rem: f64,
}

impl Model {
    fn build(fp: &FloatPoly, c: f64, h: f64, e_rem: f64) -> Model {
        let d = fp.degree();
        let kmax = ORDER.min(d);
        let mut t = [0.0; N];
        let mut at = [0.0; N];
        let mut underflow = [0.0; N];
        if c == 0.0 {
            t[..=kmax].copy_from_slice(&fp.a[..=kmax]);
            at[..=kmax].copy_from_slice(&fp.abs[..=kmax]);
        } else {
            // t_j = sum_i C(i, j) a_i c^(i-j), built from u_i = C(i, j) a_i c^(i-j)
            // with u_i <- u_i (i - j) / ((j + 1) c). Every term is independent,
            // unlike repeated synthetic division.
            let mut u = Vec::with_capacity(d + 1);
            let mut pw = 1.0;
            for a in &fp.a {
                u.push(a * pw);
                pw *= c;
            }
            let inv_c = 1.0 / c.abs();
            // Subnormal powers lose relative accuracy; bound their absolute error.
            let max_a = fp.abs.iter().cloned().fold(0.0, f64::max);
            let mut binom = d as f64 + 1.0; // C(d + 1, j + 1)
            let mut inv_cj = 1.0;
            for j in 0..=kmax {
                let (mut s0, mut s1, mut s2, mut s3) = (0.0, 0.0, 0.0, 0.0);
                let (mut a0, mut a1, mut a2, mut a3) = (0.0, 0.0, 0.0, 0.0);
                let tail = &u[j..];
                let mut chunks = tail.chunks_exact(4);
                for q in &mut chunks {
                    s0 += q[0];
                    s1 += q[1];
                    s2 += q[2];
                    s3 += q[3];
                    a0 += q[0].abs();
                    a1 += q[1].abs();
                    a2 += q[2].abs();
                    a3 += q[3].abs();
                }
                for v in chunks.remainder() {
                    s0 += v;
                    a0 += v.abs();
                }
                t[j] = (s0 + s1) + (s2 + s3);
                at[j] = (a0 + a1) + (a2 + a3);
                underflow[j] = 2.0 * max_a * d as f64 * f64::from_bits(1) * binom * inv_cj;
                if j < kmax {
                    let f = 1.0 / ((j + 1) as f64 * c);
                    for (k, v) in u[j + 1..].iter_mut().enumerate() {
                        *v *= (k + 1) as f64 * f;
                    }
                    binom *= (d - j) as f64 / (j + 2) as f64;
                    inv_cj *= inv_c;
                }
            }
        }
        let g = gamma(2 * d + 4 * ORDER + 12);
        let mut e0 = e_rem;
        let mut e1 = N as f64 * e_rem / h;
        let mut hp = 1.0;
        for j in 0..N {
            let err = g * at[j] * (1.0 + 1e-6) + underflow[j] * (1.0 + 1e-6) + TINY;
            if j >= 1 {
                e1 += j as f64 * err * hp;
                hp *= h;
            }
            e0 += err * hp;
        }
        let e0 = e0 * (1.0 + 1e-12);
        let e1 = e1 * (1.0 + 1e-12);
        if !(e0.is_finite() && e1.is_finite()) {
            return Model { c, h, t, e0: f64::INFINITY, e1: f64::INFINITY, e_rem };
        }
        Model { c, h, t, e0, e1, e_rem }
    }

    /// Coefficients of `M` re-expanded at `c + s`, with rounding bounds.
    fn shift(&self, s: f64) -> ([f64; N], [f64; N]) {
        let mut b = self.t;
        let mut ab = self.t.map(f64::abs);
        let a_s = s.abs();
        if s != 0.0 {
            for j in 0..N - 1 {
                for i in (j..N - 1).rev() {
                    b[i] += s * b[i + 1];
                    ab[i] += a_s * ab[i + 1];
                }
            }
        }
        let g = gamma(2 * N + 4);
        (b, ab.map(|v| g * v * (1.0 + 1e-6)))
    }

    /// Certified sign of `P(c + s)`, if the model can decide it.
    fn sign_at(&self, s: f64) -> Option<i32> {
        let a_s = s.abs();
        let mut v = 0.0;
        let mut av = 0.0;
        for tj in self.t.iter().rev() {
            v = v * s + tj;
            av = av * a_s + tj.abs();
        }
        let err = gamma(2 * N + 2) * av * (1.0 + 1e-6) + self.e0;
        if v.abs() > err * (1.0 + 1e-12) {
            Some(signum(v))
        } else {
            None
        }
    }
}

/// One isolated root: a single simple root in the open interval `(lo, hi)`,
/// or an exact root when `lo == hi`.
#[derive(Clone, Debug)]
struct Bracket {
    lo: Dyadic,
    hi: Dyadic,
    /// Sign of the polynomial immediately to the right of `lo`.
    s_lo: i32,
    /// Signs refer to the squarefree part rather than the polynomial itself.
    sqf: bool,
}

impl Bracket {
    fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Clone, Copy)]
struct Span {
    lo: f64,
    hi: f64,
    s_lo: i32,
    s_hi: i32,
}

/// Roots of one polynomial on `(-1, 1)` (or on the whole line for the exact
/// fallback domain).
struct Domain {
    exact: IntPolynomial,
    float: Option<FloatPoly>,
    /// Squarefree part and `gcd(p, p')`, computed on first need.
    sqf: Option<(IntPolynomial, IntPolynomial)>,
    brackets: Vec<Bracket>,
    multiple: bool,
    /// When set, only roots in this closed window are looked for.
    window: Option<(f64, f64)>,
}

impl Domain {
    fn new(exact: IntPolynomial, window: Option<(f64, f64)>) -> Self {
        let float = FloatPoly::new(&exact);
        Domain { exact, float, sqf: None, brackets: Vec::new(), multiple: false, window }
    }

    fn outside_window(&self, span: &Span) -> bool {
        matches!(self.window, Some((a, b)) if span.hi < a || span.lo > b)
    }

    fn sqf_parts(&mut self) -> Result<&(IntPolynomial, IntPolynomial)> {
        if self.sqf.is_none() {
            let g = gcd(&self.exact, &self.exact.derivative())?;
            let s = self.exact.squarefree_part()?;
            self.sqf = Some((s, g));
        }
        Ok(self.sqf.as_ref().expect("just set"))
    }

    fn poly(&self, sqf: bool) -> &IntPolynomial {
        if sqf {
            &self.sqf.as_ref().expect("squarefree part computed with the bracket").0
        } else {
            &self.exact
        }
    }

    fn sign_f64(&self, x: f64) -> i32 {
        if let Some(s) = self.float.as_ref().and_then(|fp| fp.certified_sign(x)) {
            return s;
        }
        self.exact.sign_at(&Dyadic::from_f64(x).expect("finite split point"))
    }

    fn sign_dyadic(&self, x: &Dyadic, sqf: bool) -> i32 {
        if !sqf && x.mantissa().bits() <= 53 {
            if let (Some(fp), Some(xf)) = (self.float.as_ref(), x.to_f64_exact()) {
                if let Some(s) = fp.certified_sign(xf) {
                    return s;
                }
            }
        }
        self.poly(sqf).sign_at(x)
    }

    fn push_exact_root(&mut self, x: Dyadic) {
        if self.exact.derivative().sign_at(&x) == 0 {
            self.multiple = true;
        }
        self.brackets.push(Bracket { lo: x.clone(), hi: x, s_lo: 0, sqf: false });
    }

    /// Bracket for a root known to be alone in `(lo, hi)`.
    fn push_open(&mut self, lo: Dyadic, hi: Dyadic, sqf: bool) -> Result<()> {
        let p = self.poly(sqf);
        let mut s_lo = p.sign_at(&lo);
        if s_lo == 0 {
            s_lo = -p.sign_at(&hi);
        }
        if s_lo == 0 {
            s_lo = p.derivative().sign_at(&lo);
        }
        if s_lo == 0 && !sqf {
            self.sqf_parts()?;
            return self.push_open(lo, hi, true);
        }
        if s_lo == 0 {
            return Err(Error::Internal(format!("cannot orient root bracket ({lo}, {hi})")));
        }
        self.brackets.push(Bracket { lo, hi, s_lo, sqf });
        Ok(())
    }

    /// Exact isolation of the roots in the open interval `(lo, hi)`.
    fn exact_span(&mut self, lo: &Dyadic, hi: &Dyadic) -> Result<()> {
        let (list, sqf) = match isolate_open(&self.exact, lo, hi, BRANCH_CAP) {
            Ok(list) => (list, false),
            Err(_) => {
                let (s, g) = self.sqf_parts()?;
                let repeated = g.effective_degree().unwrap_or(0) > 0 && !isolate_open(g, lo, hi, DEPTH_CAP)?.is_empty();
                let list = isolate_open(s, lo, hi, DEPTH_CAP)?;
                self.multiple |= repeated;
                (list, true)
            }
        };
        for iso in list {
            match iso {
                Isolated::Exact(x) => self.push_exact_root(x),
                Isolated::Open(l, r) => self.push_open(l, r, sqf)?,
            }
        }
        Ok(())
    }

    fn exact_span_f64(&mut self, lo: f64, hi: f64) -> Result<()> {
        let l = Dyadic::from_f64(lo).expect("finite");
        let r = Dyadic::from_f64(hi).expect("finite");
        self.exact_span(&l, &r)
    }

    /// Splits `span` at its midpoint, recording a root hit exactly.
    fn halves(&mut self, span: Span, mid_sign: Option<i32>) -> [Span; 2] {
        let mid = 0.5 * (span.lo + span.hi);
        let sm = mid_sign.unwrap_or_else(|| self.sign_f64(mid));
        if sm == 0 {
            self.push_exact_root(Dyadic::from_f64(mid).expect("finite"));
        }
        [
            Span { lo: span.lo, hi: mid, s_lo: span.s_lo, s_hi: sm },
            Span { lo: mid, hi: span.hi, s_lo: sm, s_hi: span.s_hi },
        ]
    }

    /// Isolates all roots in `(-1, 1)`; `s_lo`, `s_hi` are the (nonzero) signs at `∓1`.
    fn analyze_unit(&mut self, s_lo: i32, s_hi: i32) -> Result<()> {
        if self.float.is_none() {
            self.exact_span(&Dyadic::from_int(-1), &Dyadic::from_int(1))?;
            return self.finish();
        }
        let mut work = vec![Span { lo: -1.0, hi: 1.0, s_lo, s_hi }];
        while let Some(span) = work.pop() {
            if self.outside_window(&span) {
                continue;
            }
            if span.hi - span.lo < MIN_WIDTH {
                self.exact_span_f64(span.lo, span.hi)?;
                continue;
            }
            let c = 0.5 * (span.lo + span.hi);
            let h = 0.5 * (span.hi - span.lo);
            let fp = self.float.as_ref().expect("float path");
            let (e_rem, rms) = fp.truncation(c, h);
            if !(e_rem <= TRUNCATION_RATIO * rms) {
                work.extend(self.halves(span, None));
                continue;
            }
            let model = Model::build(fp, c, h, e_rem);
            self.run_model(&model, span, &mut work)?;
        }
        self.finish()
    }

    fn run_model(&mut self, m: &Model, span: Span, work: &mut Vec<Span>) -> Result<()> {
        let mut stack = vec![span];
        while let Some(iv) = stack.pop() {
            if self.outside_window(&iv) {
                continue;
            }
            let x = 0.5 * (iv.lo + iv.hi);
            let g = 0.5 * (iv.hi - iv.lo);
            let (tau, delta) = m.shift(x - m.c);

            let mut gp = 1.0;
            let (mut sum_t, mut sum_d) = (0.0, delta[0]);
            for j in 1..N {
                gp *= g;
                sum_t += tau[j].abs() * gp;
                sum_d += delta[j] * gp;
            }
            let lhs0 = tau[0].abs();
            if lhs0 * (1.0 - 1e-12) > (sum_t + sum_d + m.e0) * (1.0 + 1e-12) {
                continue;
            }
            gp = 1.0;
            let (mut sum_t1, mut sum_d1) = (0.0, delta[1]);
            for j in 2..N {
                gp *= g;
                sum_t1 += j as f64 * tau[j].abs() * gp;
                sum_d1 += j as f64 * delta[j] * gp;
            }
            let lhs1 = tau[1].abs();
            if lhs1 * (1.0 - 1e-12) > (sum_t1 + sum_d1 + m.e1) * (1.0 + 1e-12) {
                // Strictly monotone on the closed span: one root iff the signs differ.
                if iv.s_lo != 0 && iv.s_hi != 0 && iv.s_lo != iv.s_hi {
                    let lo = Dyadic::from_f64(iv.lo).expect("finite");
                    let hi = Dyadic::from_f64(iv.hi).expect("finite");
                    self.brackets.push(Bracket { lo, hi, s_lo: iv.s_lo, sqf: false });
                }
                continue;
            }
            let blocked_by_error = lhs0 > sum_t || lhs1 > sum_t1;
            if !blocked_by_error && g >= m.h / LOCAL_SHRINK {
                let sm = m.sign_at(x - m.c);
                stack.extend(self.halves(iv, sm));
                continue;
            }
            let rounding_bound = m.e0 - m.e_rem > m.e_rem;
            if 2.0 * g < 2.0 * MIN_WIDTH || (blocked_by_error && rounding_bound) {
                self.exact_span_f64(iv.lo, iv.hi)?;
            } else {
                // A smaller model has a much smaller truncation error.
                work.extend(self.halves(iv, None));
            }
        }
        Ok(())
    }

    /// Exact isolation over the whole real line.
    fn analyze_line(&mut self) -> Result<()> {
        let (s, g) = self.sqf_parts()?.clone();
        if g.effective_degree().unwrap_or(0) > 0 && count_roots(&g, &RootRange::real_line())? > 0 {
            self.multiple = true;
        }
        if s.effective_degree().unwrap_or(0) > 0 {
            let (lo, hi) = finite_ends(&s, &RootRange::real_line())?;
            for iso in isolate_open(&s, &lo, &hi, DEPTH_CAP)? {
                match iso {
                    Isolated::Exact(x) => self.brackets.push(Bracket { lo: x.clone(), hi: x, s_lo: 0, sqf: true }),
                    Isolated::Open(l, r) => self.push_open(l, r, true)?,
                }
            }
        }
        self.finish()
    }

    fn finish(&mut self) -> Result<()> {
        self.brackets.sort_by(|a, b| a.lo.cmp(&b.lo));
        Ok(())
    }

    /// Position of the bracketed root relative to `b`.
    fn locate(&self, br: &Bracket, b: &Dyadic) -> Ordering {
        if br.is_exact() {
            return br.lo.cmp(b);
        }
        if *b <= br.lo {
            return Ordering::Greater;
        }
        if *b >= br.hi {
            return Ordering::Less;
        }
        match self.sign_dyadic(b, br.sqf) {
            0 => Ordering::Equal,
            s if s == br.s_lo => Ordering::Greater,
            _ => Ordering::Less,
        }
    }

    fn in_range(&self, br: &Bracket, range: &RootRange) -> bool {
        let above = match &range.lo {
            Bound::NegInf => true,
            Bound::PosInf => false,
            Bound::Finite(a) => match self.locate(br, a) {
                Ordering::Greater => true,
                Ordering::Equal => range.lo_closed,
                Ordering::Less => false,
            },
        };
        above
            && match &range.hi {
                Bound::PosInf => true,
                Bound::NegInf => false,
                Bound::Finite(b) => match self.locate(br, b) {
                    Ordering::Less => true,
                    Ordering::Equal => range.hi_closed,
                    Ordering::Greater => false,
                },
            }
    }

    /// Shrinks a bracket until its width is at most `width`.
    fn refine(&self, br: &Bracket, width: &Dyadic) -> DyadicInterval {
        let (mut lo, mut hi) = (br.lo.clone(), br.hi.clone());
        while hi.sub(&lo) > *width {
            let mid = Dyadic::midpoint(&lo, &hi);
            match self.sign_dyadic(&mid, br.sqf) {
                0 => return DyadicInterval::point(mid),
                s if s == br.s_lo => lo = mid,
                _ => hi = mid,
            }
        }
        DyadicInterval::new(lo, hi)
    }
}

enum Mode {
    /// No real roots besides the special ones.
    Trivial,
    /// `inner`: roots of `R` in `(-1, 1)`; `outer`: roots `y` of the reversed
    /// `R` in `(-1, 1)`, i.e. real roots `1/y` of `R` outside `[-1, 1]`.
    /// `outer` is skipped for analyses restricted to a window in `[-1, 1]`.
    Split { inner: Box<Domain>, outer: Option<Box<Domain>> },
    /// Everything done exactly on the squarefree part over the whole line.
    Line(Box<Domain>),
}

/// All distinct real roots of one polynomial, isolated once and queryable for
/// counts on arbitrary ranges.
pub struct FastAnalysis {
    poly: IntPolynomial,
    /// Roots exactly at `-1`, `0` or `1`, with a flag for multiplicity > 1.
    special: Vec<(Dyadic, bool)>,
    mode: Mode,
    multiple: bool,
    window: Option<(Dyadic, Dyadic)>,
}

fn split_linear_factor(p: IntPolynomial, root: i64) -> Result<(IntPolynomial, usize)> {
    let mut p = p;
    let mut k = 0;
    let x = Dyadic::from_int(root);
    let factor = IntPolynomial::from_i64s(&[-root, 1]);
    while p.effective_degree().unwrap_or(0) > 0 && p.sign_at(&x) == 0 {
        p = p.div_exact(&factor)?;
        k += 1;
    }
    Ok((p, k))
}

impl FastAnalysis {
    /// Isolates every real root of `p`.
    pub fn new(p: &IntPolynomial) -> Result<Self> {
        Self::build(p, None)
    }

    /// Isolates only the roots in the closed window `[lo, hi]`, with
    /// `-1 <= lo < hi <= 1`. Queries outside the window fall back to the exact
    /// counters.
    pub fn restricted(p: &IntPolynomial, lo: f64, hi: f64) -> Result<Self> {
        if !(-1.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(Error::InvalidInput(format!("analysis window [{lo}, {hi}] must lie inside [-1, 1]")));
        }
        Self::build(p, Some((lo, hi)))
    }

    fn build(p: &IntPolynomial, window: Option<(f64, f64)>) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let t = p.trimmed().with_scale_exp(0);
        let mut special = Vec::new();
        let low = t.coeffs().iter().position(|c| !num_traits::Zero::is_zero(c)).expect("nonzero");
        let mut r = IntPolynomial::new(t.coeffs()[low..].to_vec(), 0);
        if low > 0 {
            special.push((Dyadic::zero(), low > 1));
        }
        let (r1, k1) = split_linear_factor(r, 1)?;
        let (r2, k2) = split_linear_factor(r1, -1)?;
        r = r2;
        if k1 > 0 {
            special.push((Dyadic::from_int(1), k1 > 1));
        }
        if k2 > 0 {
            special.push((Dyadic::from_int(-1), k2 > 1));
        }
        special.sort_by(|a, b| a.0.cmp(&b.0));

        let d = r.effective_degree().unwrap_or(0);
        let mode = if d == 0 {
            Mode::Trivial
        } else if r.max_coeff_bits() > MAX_FLOAT_BITS {
            let mut line = Domain::new(t.clone(), None);
            line.analyze_line()?;
            special.clear();
            Mode::Line(Box::new(line))
        } else {
            let s_minus = r.sign_at(&Dyadic::from_int(-1));
            let s_plus = r.sign_at(&Dyadic::from_int(1));
            let mut inner = Domain::new(r.clone(), window);
            inner.analyze_unit(s_minus, s_plus)?;
            let outer = if window.is_none() {
                let mut outer = Domain::new(r.reversed(), None);
                let parity = if d % 2 == 0 { 1 } else { -1 };
                outer.analyze_unit(parity * s_minus, s_plus)?;
                Some(Box::new(outer))
            } else {
                None
            };
            Mode::Split { inner: Box::new(inner), outer }
        };
        let multiple = special.iter().any(|s| s.1)
            || match &mode {
                Mode::Trivial => false,
                Mode::Split { inner, outer } => inner.multiple || outer.as_ref().map_or(false, |o| o.multiple),
                Mode::Line(line) => line.multiple,
            };
        let window = window.map(|(a, b)| (Dyadic::from_f64(a).expect("finite"), Dyadic::from_f64(b).expect("finite")));
        Ok(FastAnalysis { poly: t, special, mode, multiple, window })
    }

    /// True when some real root (inside the window, if restricted) has
    /// multiplicity greater than one.
    pub fn has_multiple_real_root(&self) -> bool {
        self.multiple
    }

    /// Number of distinct real roots.
    pub fn total(&self) -> Result<usize> {
        if self.window.is_some() {
            return count_roots(&self.poly, &RootRange::real_line());
        }
        Ok(self.special.len()
            + match &self.mode {
                Mode::Trivial => 0,
                Mode::Split { inner, outer } => inner.brackets.len() + outer.as_ref().map_or(0, |o| o.brackets.len()),
                Mode::Line(line) => line.brackets.len(),
            })
    }

    /// Whether `range` can be answered from the brackets: finite ends in
    /// `[-1, 1]`, or inside the window for restricted analyses.
    fn split_supported(&self, range: &RootRange) -> bool {
        let ok = |b: &Bound| match (b, &self.window) {
            (Bound::Finite(x), None) => x.abs() <= Dyadic::from_int(1),
            (Bound::Finite(x), Some((lo, hi))) => lo <= x && x <= hi,
            (_, None) => true,
            (_, Some(_)) => false,
        };
        ok(&range.lo) && ok(&range.hi)
    }

    /// Number of distinct real roots in `range`.
    pub fn count(&self, range: &RootRange) -> Result<usize> {
        if range.is_empty() {
            return Ok(0);
        }
        let mut n = self.special.iter().filter(|s| range.contains(&s.0)).count();
        match &self.mode {
            Mode::Trivial => {}
            Mode::Line(line) => n += line.brackets.iter().filter(|b| line.in_range(b, range)).count(),
            Mode::Split { inner, outer } => {
                if !self.split_supported(range) {
                    return count_roots(&self.poly, range);
                }
                n += inner.brackets.iter().filter(|b| inner.in_range(b, range)).count();
                let up = range.hi == Bound::PosInf;
                let down = range.lo == Bound::NegInf;
                if let (true, Some(outer)) = (up || down, outer) {
                    let zero = Dyadic::zero();
                    n += outer
                        .brackets
                        .iter()
                        .filter(|b| match outer.locate(b, &zero) {
                            Ordering::Greater => up,
                            Ordering::Less => down,
                            Ordering::Equal => false,
                        })
                        .count();
                }
            }
        }
        Ok(n)
    }

    /// Isolating intervals of width at most `width` for the roots in `range`,
    /// sorted and pairwise disjoint.
    pub fn isolate(&self, range: &RootRange, width: &Dyadic) -> Result<Vec<DyadicInterval>> {
        if width.signum() <= 0 {
            return Err(Error::InvalidInput(format!("isolation width must be positive, got {width}")));
        }
        let finite = matches!(range.lo, Bound::Finite(_)) && matches!(range.hi, Bound::Finite(_));
        let domain = match &self.mode {
            Mode::Trivial => None,
            Mode::Line(line) => Some(line.as_ref()),
            Mode::Split { inner, .. } if finite && self.split_supported(range) => Some(inner.as_ref()),
            Mode::Split { .. } => {
                return Ok(super::isolate::isolate_roots(&self.poly, range, width)?.intervals);
            }
        };
        let mut out: Vec<DyadicInterval> = self
            .special
            .iter()
            .filter(|s| range.contains(&s.0))
            .map(|s| DyadicInterval::point(s.0.clone()))
            .collect();
        if let Some(dom) = domain {
            for br in dom.brackets.iter().filter(|b| dom.in_range(b, range)) {
                out.push(dom.refine(br, width));
            }
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        Ok(out)
    }
}
