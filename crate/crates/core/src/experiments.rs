//! Monte Carlo harness: per-sample root statistics, summaries, and the
//! individual experiments (expectation, Gaussian/Bernoulli gap, edge counts,
//! near-double roots, small-ball probabilities, truncation, Jensen bound).
//!
//! Every experiment maps sample indices `0..M` through a pure function and
//! collects the results in index order, so output is identical for any rayon
//! thread count.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::{Read, Write};

use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::{sample, truncate, Distribution, EnsembleSpec};
use crate::error::{Error, Result};
use crate::poly::{ldexp, Dyadic, DyadicInterval, IntPolynomial};
use crate::root_count::{FastAnalysis, RootRange};

/// Refinement width for bulk diagnostics, `2^-80`.
pub const DIAGNOSTIC_WIDTH_LOG2: i64 = -80;
/// Target relative accuracy of `min_abs_deriv`.
pub const DERIV_REL_ACCURACY: f64 = 1e-6;
/// Default `(B, B_gap)` ladder: a sample violates `(B, B_gap)` when
/// `min_abs_deriv <= n^-B` or `min_gap <= n^-B_gap`.
pub const DEFAULT_THRESHOLDS: [(f64, f64); 4] = [(4.0, 6.0), (6.0, 9.0), (8.0, 12.0), (9.0, 12.0)];
/// Default exponent `B` in the truncation coupling `m = 4 B ln(n) / r`.
pub const DEFAULT_COUPLING_B: f64 = 8.0;

/// Normal-approximation 95% half-width factor.
const Z95: f64 = 1.96;

/// Per-sample statistics, one CSV row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub degree: usize,
    pub dist: Distribution,
    /// Distinct real roots on the whole line.
    pub roots_total: usize,
    /// Distinct real roots in the configured query range.
    pub roots_in_query: usize,
    /// `min |P'(x)|` over bulk-window roots, in true (unscaled) units.
    pub min_abs_deriv: Option<f64>,
    /// Smallest distance between consecutive bulk-window roots.
    pub min_gap: Option<f64>,
    /// Some real root has multiplicity greater than one.
    pub had_multiplicity: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub samples: usize,
    pub mean: f64,
    /// Unbiased sample variance (0 for a single sample).
    pub variance: f64,
    /// `1.96 * sqrt(variance / samples)`.
    pub ci_halfwidth: f64,
    #[serde(default)]
    pub extras: BTreeMap<String, f64>,
}

impl SummaryStats {
    /// Summary of integer observations. Sums are exact, so the result depends
    /// only on the multiset of values.
    pub fn from_counts<I: IntoIterator<Item = i64>>(values: I) -> Self {
        let (mut m, mut s1, mut s2) = (0i128, 0i128, 0i128);
        for v in values {
            m += 1;
            s1 += v as i128;
            s2 += (v as i128) * (v as i128);
        }
        if m == 0 {
            return SummaryStats { samples: 0, mean: f64::NAN, variance: f64::NAN, ci_halfwidth: f64::NAN, extras: BTreeMap::new() };
        }
        let mean = s1 as f64 / m as f64;
        let variance = if m > 1 { (m * s2 - s1 * s1) as f64 / (m * (m - 1)) as f64 } else { 0.0 };
        let ci_halfwidth = Z95 * (variance / m as f64).sqrt();
        SummaryStats { samples: m as usize, mean, variance, ci_halfwidth, extras: BTreeMap::new() }
    }

    /// Summary of `roots_in_query`, with extras that can be recomputed from
    /// the records alone.
    pub fn from_records(records: &[SampleRecord]) -> Self {
        let mut s = SummaryStats::from_counts(records.iter().map(|r| r.roots_in_query as i64));
        let total: u64 = records.iter().map(|r| r.roots_total as u64).sum();
        s.extras.insert("mean_roots_total".into(), total as f64 / records.len().max(1) as f64);
        s.extras.insert("multiplicity_samples".into(), records.iter().filter(|r| r.had_multiplicity).count() as f64);
        s
    }
}

/// The bulk window `(1 - b0_inv, 1 - b1 ln(n) / n]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BulkWindow {
    pub b0_inv: f64,
    pub b1: f64,
}

impl Default for BulkWindow {
    fn default() -> Self {
        BulkWindow { b0_inv: 0.2, b1: 4.0 }
    }
}

impl BulkWindow {
    /// `(lo, hi)` for degree `n`; errors unless `0 < b1 ln n / n < b0_inv < 1`.
    pub fn bounds(&self, n: usize) -> Result<(f64, f64)> {
        let inner = self.b1 * (n as f64).ln() / n as f64;
        if !(inner > 0.0 && inner < self.b0_inv && self.b0_inv < 1.0) {
            return Err(Error::InvalidInput(format!(
                "bulk window (1 - {}, 1 - {} ln n / n] is empty or invalid at n = {n}",
                self.b0_inv, self.b1
            )));
        }
        Ok((1.0 - self.b0_inv, 1.0 - inner))
    }

    pub fn range(&self, n: usize) -> Result<RootRange> {
        let (lo, hi) = self.bounds(n)?;
        RootRange::half_open_f64(lo, hi)
    }
}

/// What to measure on each sample.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleQuery {
    pub interval: RootRange,
    /// Compute `min_abs_deriv` / `min_gap` on this window when set.
    pub bulk: Option<BulkWindow>,
}

impl SampleQuery {
    pub fn full_line() -> Self {
        SampleQuery { interval: RootRange::real_line(), bulk: None }
    }
}

/// One analyzed sample.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleAnalysis {
    pub record: SampleRecord,
    /// Roots in `(-1/2, 1/2)`; only computed for Rademacher samples.
    pub exclusion_zone_roots: Option<usize>,
}

/// Roots statistics of one polynomial on a window.
#[derive(Clone, Debug, PartialEq)]
pub struct BulkRootStats {
    pub count: usize,
    pub min_abs_deriv: Option<f64>,
    pub min_gap: Option<f64>,
}

fn exclusion_zone() -> RootRange {
    RootRange::from_f64(-0.5, 0.5, false, false).expect("valid range")
}

/// Roots of `p` in `range` isolated to `2^-80`; `|P'|` is evaluated exactly
/// at each midpoint and the width is shrunk until `max |P''| * width / 2`
/// is below [`DERIV_REL_ACCURACY`] of that value.
pub fn bulk_root_stats(p: &IntPolynomial, range: &RootRange) -> Result<BulkRootStats> {
    let fa = FastAnalysis::new(p)?;
    bulk_stats_with(p, &fa, range)
}

fn bulk_stats_with(p: &IntPolynomial, fa: &FastAnalysis, range: &RootRange) -> Result<BulkRootStats> {
    let width = Dyadic::pow2(DIAGNOSTIC_WIDTH_LOG2);
    let intervals = fa.isolate(range, &width)?;
    if intervals.is_empty() {
        return Ok(BulkRootStats { count: 0, min_abs_deriv: None, min_gap: None });
    }
    let dp = p.derivative();
    let ddp = dp.derivative();
    let sqf = if fa.has_multiple_real_root() { Some(p.squarefree_part()?) } else { None };
    let signer = sqf.as_ref().unwrap_or(p);
    let mut min_d = f64::INFINITY;
    let mut mids = Vec::with_capacity(intervals.len());
    for iv in intervals {
        let mut iv = iv;
        let mut log2w = DIAGNOSTIC_WIDTH_LOG2;
        let d = loop {
            let d = abs_scaled(&dp, &iv.midpoint(), p.scale_exp());
            let err = second_derivative_bound(&ddp, &iv, p.scale_exp()) * iv.width().to_f64() * 0.5;
            // Past 2^-400 the estimate is reported as is.
            if err <= DERIV_REL_ACCURACY * d || log2w <= -400 {
                break d;
            }
            log2w -= 80;
            iv = bisect_to(signer, iv, &Dyadic::pow2(log2w));
        };
        min_d = min_d.min(d);
        mids.push(iv.midpoint());
    }
    let min_gap = mids.windows(2).map(|w| w[1].sub(&w[0]).to_f64()).fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.min(g))));
    Ok(BulkRootStats { count: mids.len(), min_abs_deriv: Some(min_d), min_gap })
}

/// `|q(x)| * 2^-scale` as a float.
fn abs_scaled(q: &IntPolynomial, x: &Dyadic, scale: i64) -> f64 {
    let v = q.eval_dyadic(x).abs();
    ldexp(v.to_f64(), -scale)
}

/// Upper bound on `|q|` over the interval, true units.
fn second_derivative_bound(q: &IntPolynomial, iv: &DyadicInterval, scale: i64) -> f64 {
    if iv.width().is_zero() {
        return 0.0;
    }
    let r = iv.lo.to_f64().abs().max(iv.hi.to_f64().abs()) * (1.0 + 1e-15);
    let mut acc = 0.0;
    for c in q.coeffs().iter().rev() {
        acc = acc * r + c.abs().to_f64().unwrap_or(f64::INFINITY);
    }
    ldexp(acc * (1.0 + 1e-12), -scale)
}

/// Bisection of an isolating interval of a squarefree-at-the-root polynomial.
fn bisect_to(p: &IntPolynomial, iv: DyadicInterval, width: &Dyadic) -> DyadicInterval {
    let (mut lo, mut hi) = (iv.lo, iv.hi);
    let s_lo = p.sign_at(&lo);
    if s_lo == 0 {
        return DyadicInterval::new(lo, hi);
    }
    while hi.sub(&lo) > *width {
        let mid = Dyadic::midpoint(&lo, &hi);
        match p.sign_at(&mid) {
            0 => return DyadicInterval::point(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    DyadicInterval::new(lo, hi)
}

/// Analyzes sample `index` of `spec` against `query`.
pub fn analyze_sample(spec: &EnsembleSpec, index: u64, query: &SampleQuery) -> Result<SampleAnalysis> {
    let p = sample(spec, index);
    analyze_polynomial(&p, spec, index, query)
}

fn analyze_polynomial(p: &IntPolynomial, spec: &EnsembleSpec, index: u64, query: &SampleQuery) -> Result<SampleAnalysis> {
    let fa = FastAnalysis::new(p)?;
    let roots_total = fa.total()?;
    let roots_in_query = fa.count(&query.interval)?;
    let (min_abs_deriv, min_gap) = match &query.bulk {
        Some(w) => {
            let s = bulk_stats_with(p, &fa, &w.range(spec.degree)?)?;
            (s.min_abs_deriv, s.min_gap)
        }
        None => (None, None),
    };
    let exclusion_zone_roots = match spec.dist {
        Distribution::Rademacher => Some(fa.count(&exclusion_zone())?),
        _ => None,
    };
    Ok(SampleAnalysis {
        record: SampleRecord {
            index,
            degree: spec.degree,
            dist: spec.dist,
            roots_total,
            roots_in_query,
            min_abs_deriv,
            min_gap,
            had_multiplicity: fa.has_multiple_real_root(),
        },
        exclusion_zone_roots,
    })
}

fn check_samples(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectationRun {
    pub records: Vec<SampleRecord>,
    pub summary: SummaryStats,
    /// Total roots found in `(-1/2, 1/2)` over the Rademacher samples (0 for
    /// other ensembles, where it is not computed).
    pub exclusion_zone_roots: usize,
}

/// Samples `0..m`, counting roots in `query.interval`.
pub fn run_expectation(spec: &EnsembleSpec, m: usize, query: &SampleQuery) -> Result<ExpectationRun> {
    check_samples(m)?;
    let analyses: Vec<SampleAnalysis> =
        (0..m as u64).into_par_iter().map(|i| analyze_sample(spec, i, query)).collect::<Result<_>>()?;
    let exclusion_zone_roots = analyses.iter().filter_map(|a| a.exclusion_zone_roots).sum();
    let records: Vec<SampleRecord> = analyses.into_iter().map(|a| a.record).collect();
    let summary = SummaryStats::from_records(&records);
    Ok(ExpectationRun { records, summary, exclusion_zone_roots })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub degree: usize,
    pub gaussian: SummaryStats,
    pub rademacher: SummaryStats,
    /// `gaussian.mean - rademacher.mean`.
    pub gap: f64,
    pub exclusion_zone_roots: usize,
}

/// Full-line means for Gaussian and Rademacher coefficients at each degree.
pub fn run_gap(degrees: &[usize], m: usize, master_seed: u64) -> Result<Vec<GapRow>> {
    if degrees.is_empty() {
        return Err(Error::InvalidInput("run_gap needs at least one degree".into()));
    }
    let query = SampleQuery::full_line();
    degrees
        .iter()
        .map(|&n| {
            let g = run_expectation(&EnsembleSpec::new(Distribution::Gaussian, n, master_seed)?, m, &query)?;
            let r = run_expectation(&EnsembleSpec::new(Distribution::Rademacher, n, master_seed)?, m, &query)?;
            Ok(GapRow {
                degree: n,
                gap: g.summary.mean - r.summary.mean,
                gaussian: g.summary,
                rademacher: r.summary,
                exclusion_zone_roots: r.exclusion_zone_roots,
            })
        })
        .collect()
}

/// Roots in `[0, 1 - 1/C)`. Extras: `edge_bound`, and `mirrored_mean`, the
/// mean count on `(-(1 - 1/C), 0]`.
pub fn run_edge(spec: &EnsembleSpec, m: usize, cap: f64) -> Result<SummaryStats> {
    check_samples(m)?;
    let bound = crate::density::edge_bound(cap)?;
    let a = 1.0 - 1.0 / cap;
    let right = RootRange::from_f64(0.0, a, true, false)?;
    let left = RootRange::from_f64(-a, 0.0, false, true)?;
    let pairs: Vec<(i64, i64)> = (0..m as u64)
        .into_par_iter()
        .map(|i| {
            let fa = FastAnalysis::restricted(&sample(spec, i), -a, a)?;
            Ok((fa.count(&right)? as i64, fa.count(&left)? as i64))
        })
        .collect::<Result<_>>()?;
    let mut s = SummaryStats::from_counts(pairs.iter().map(|p| p.0));
    s.extras.insert("edge_bound".into(), bound);
    s.extras.insert("mirrored_mean".into(), SummaryStats::from_counts(pairs.iter().map(|p| p.1)).mean);
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublesRow {
    /// Derivative threshold exponent: `min_abs_deriv <= n^-deriv_exp`.
    pub deriv_exp: f64,
    /// Gap threshold exponent: `min_gap <= n^-gap_exp`.
    pub gap_exp: f64,
    pub violations: usize,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoublesRun {
    pub records: Vec<SampleRecord>,
    pub rows: Vec<DoublesRow>,
    pub exclusion_zone_roots: usize,
}

/// Near-double-root statistics on the bulk window; `roots_in_query` counts
/// the window.
pub fn run_doubles(spec: &EnsembleSpec, m: usize, window: BulkWindow, thresholds: &[(f64, f64)]) -> Result<DoublesRun> {
    let query = SampleQuery { interval: window.range(spec.degree)?, bulk: Some(window) };
    let run = run_expectation(spec, m, &query)?;
    let n = spec.degree as f64;
    let rows = thresholds
        .iter()
        .map(|&(b, bg)| {
            let violations = run.records.iter().filter(|r| violates(r, n.powf(-b), n.powf(-bg))).count();
            DoublesRow { deriv_exp: b, gap_exp: bg, violations, fraction: violations as f64 / m as f64 }
        })
        .collect();
    Ok(DoublesRun { records: run.records, rows, exclusion_zone_roots: run.exclusion_zone_roots })
}

fn violates(r: &SampleRecord, deriv: f64, gap: f64) -> bool {
    r.min_abs_deriv.is_some_and(|d| d <= deriv) || r.min_gap.is_some_and(|g| g <= gap)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallBallRow {
    pub gamma: f64,
    pub hits: usize,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmallBallRun {
    pub rows: Vec<SmallBallRow>,
    /// Least-squares slope of `ln P` against `ln gamma` over rows with
    /// `0 < gamma` and at least one hit; `None` with fewer than two such rows.
    pub slope: Option<f64>,
    pub exclusion_zone_roots: usize,
}

/// Empirical `P(|P(x)| <= gamma)` with exact evaluation at the dyadic `x`.
/// For Rademacher samples the roots in `(-1/2, 1/2)` are counted as well.
pub fn run_smallball(spec: &EnsembleSpec, m: usize, x: f64, gammas: &[f64]) -> Result<SmallBallRun> {
    check_samples(m)?;
    if gammas.is_empty() || gammas.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
        return Err(Error::InvalidInput("gammas must be a nonempty list of finite values >= 0".into()));
    }
    let xd = Dyadic::from_f64(x).ok_or_else(|| Error::InvalidInput(format!("x must be finite, got {x}")))?;
    let gd: Vec<Dyadic> = gammas.iter().map(|g| Dyadic::from_f64(*g).expect("finite")).collect();
    let per: Vec<(Vec<bool>, usize)> = (0..m as u64)
        .into_par_iter()
        .map(|i| {
            let p = sample(spec, i);
            let v = p.eval_dyadic(&xd).abs().shl(-p.scale_exp());
            let hits = gd.iter().map(|g| v <= *g).collect();
            let zone = match spec.dist {
                Distribution::Rademacher => FastAnalysis::restricted(&p, -0.5, 0.5)?.count(&exclusion_zone())?,
                _ => 0,
            };
            Ok((hits, zone))
        })
        .collect::<Result<_>>()?;
    let rows: Vec<SmallBallRow> = gammas
        .iter()
        .enumerate()
        .map(|(k, &gamma)| {
            let hits = per.iter().filter(|s| s.0[k]).count();
            SmallBallRow { gamma, hits, probability: hits as f64 / m as f64 }
        })
        .collect();
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.gamma > 0.0 && r.hits > 0).map(|r| (r.gamma.ln(), r.probability.ln())).collect();
    Ok(SmallBallRun { slope: least_squares_slope(&pts), rows, exclusion_zone_roots: per.iter().map(|s| s.1).sum() })
}

/// Slope of the least-squares line through `pts`.
pub fn least_squares_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `m = ceil(4 B ln(n) / r)`.
pub fn coupled_truncation_degree(n: usize, r: f64, b: f64) -> Result<usize> {
    if !(r > 0.0 && r < 1.0) || !(b > 0.0) || n < 2 {
        return Err(Error::InvalidInput(format!("coupling needs 0 < r < 1, B > 0, n >= 2 (got r = {r}, B = {b}, n = {n})")));
    }
    Ok((4.0 * b * (n as f64).ln() / r).ceil() as usize)
}

/// Inverse of [`coupled_truncation_degree`]: `r = 4 B ln(n) / m`.
pub fn coupled_radius(n: usize, m: usize, b: f64) -> f64 {
    4.0 * b * (n as f64).ln() / m as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationRun {
    pub full: SummaryStats,
    pub truncated: SummaryStats,
    /// Per-sample `count(P_n) - count(P_m)`.
    pub paired: SummaryStats,
    /// `|full.mean - truncated.mean|`.
    pub difference: f64,
    /// Fraction of samples with identical counts.
    pub identical_fraction: f64,
    /// `(count(P_n), count(P_m))` per sample.
    pub counts: Vec<(usize, usize)>,
}

/// Counts roots of `P_n` and of `P_m = truncate(P_n, m)` on the half-open
/// interval `(a, b]`.
pub fn run_truncation(spec: &EnsembleSpec, m_samples: usize, m: usize, a: f64, b: f64) -> Result<TruncationRun> {
    check_samples(m_samples)?;
    if m > spec.degree {
        return Err(Error::BadDegree(format!("truncation degree {m} exceeds n = {}", spec.degree)));
    }
    let range = RootRange::half_open_f64(a, b)?;
    let analyze = |p: &IntPolynomial| -> Result<FastAnalysis> {
        if -1.0 <= a && a < b && b <= 1.0 {
            FastAnalysis::restricted(p, a, b)
        } else {
            FastAnalysis::new(p)
        }
    };
    let counts: Vec<(usize, usize)> = (0..m_samples as u64)
        .into_par_iter()
        .map(|i| {
            let p = sample(spec, i);
            let full = analyze(&p)?.count(&range)?;
            let t = truncate(&p, m)?;
            // A truncation with vanishing coefficients has no roots to compare.
            let cut = if t.is_zero() { 0 } else { analyze(&t)?.count(&range)? };
            Ok((full, cut))
        })
        .collect::<Result<_>>()?;
    let full = SummaryStats::from_counts(counts.iter().map(|c| c.0 as i64));
    let truncated = SummaryStats::from_counts(counts.iter().map(|c| c.1 as i64));
    let paired = SummaryStats::from_counts(counts.iter().map(|c| c.0 as i64 - c.1 as i64));
    let identical = counts.iter().filter(|c| c.0 == c.1).count();
    Ok(TruncationRun {
        difference: (full.mean - truncated.mean).abs(),
        full,
        truncated,
        paired,
        identical_fraction: identical as f64 / m_samples as f64,
        counts,
    })
}

/// Jensen-type bound `ln(M / |P(0)|) / ln(R / r)` on the number of roots in
/// `[-r, r]`, where `M` bounds `max_{|z| = R} |P(z)|`.
///
/// `M` is the maximum of `|P|` over `N = max(256, 16 n)` equally spaced points
/// (a multiple of 4, so the axes are included), evaluated in floating point.
/// Between grid points `|P|` can exceed `M` by at most
/// `(pi R / N) * sum i |c_i| R^(i-1)`; this is a diagnostic, not a certificate.
pub fn jensen_bound(p: &IntPolynomial, r: f64, big_r: f64) -> Result<f64> {
    if !(0.0 < r && r < big_r && big_r < 1.0) {
        return Err(Error::InvalidInput(format!("need 0 < r < R < 1, got r = {r}, R = {big_r}")));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c: Vec<f64> = p.coeffs().iter().map(|c| ldexp(Dyadic::from_int(c.clone()).to_f64(), -p.scale_exp())).collect();
    if c[0] == 0.0 {
        return Err(Error::Domain("Jensen bound needs P(0) != 0".into()));
    }
    let n = c.len() - 1;
    let grid = 256usize.max(16 * n);
    let mut max = 0.0f64;
    for k in 0..grid {
        let theta = 2.0 * PI * k as f64 / grid as f64;
        let (zr, zi) = (big_r * theta.cos(), big_r * theta.sin());
        let (mut re, mut im) = (0.0, 0.0);
        for ci in c.iter().rev() {
            let t = re * zr - im * zi + ci;
            im = re * zi + im * zr;
            re = t;
        }
        max = max.max(re.hypot(im));
    }
    Ok(((max / c[0].abs()).ln() / (big_r / r).ln()).max(0.0))
}

const CSV_HEADER: [&str; 8] =
    ["index", "degree", "dist", "roots_total", "roots_in_query", "min_abs_deriv", "min_gap", "had_multiplicity"];

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes records as CSV; floats use the shortest round-trip representation
/// and absent values are empty fields.
pub fn write_records_csv<W: Write>(out: W, records: &[SampleRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io_err)?;
    for r in records {
        w.write_record([
            r.index.to_string(),
            r.degree.to_string(),
            r.dist.name().to_string(),
            r.roots_total.to_string(),
            r.roots_in_query.to_string(),
            opt_f64(r.min_abs_deriv),
            opt_f64(r.min_gap),
            r.had_multiplicity.to_string(),
        ])
        .map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<SampleRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers().map_err(io_err)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::InvalidInput(format!("unexpected CSV header {:?}", header)));
    }
    let bad = |what: &str, v: &str| Error::InvalidInput(format!("bad {what} field '{v}'"));
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row.map_err(io_err)?;
        let f = |k: usize| row.get(k).unwrap_or("");
        let opt = |k: usize, what: &str| -> Result<Option<f64>> {
            match f(k) {
                "" => Ok(None),
                v => v.parse().map(Some).map_err(|_| bad(what, v)),
            }
        };
        out.push(SampleRecord {
            index: f(0).parse().map_err(|_| bad("index", f(0)))?,
            degree: f(1).parse().map_err(|_| bad("degree", f(1)))?,
            dist: f(2).parse()?,
            roots_total: f(3).parse().map_err(|_| bad("roots_total", f(3)))?,
            roots_in_query: f(4).parse().map_err(|_| bad("roots_in_query", f(4)))?,
            min_abs_deriv: opt(5, "min_abs_deriv")?,
            min_gap: opt(6, "min_gap")?,
            had_multiplicity: f(7).parse().map_err(|_| bad("had_multiplicity", f(7)))?,
        });
    }
    Ok(out)
}

/// JSON summary document: `{spec, M, mean, variance, ci_halfwidth, extras}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryDocument {
    pub spec: EnsembleSpec,
    #[serde(rename = "M")]
    pub samples: usize,
    pub mean: f64,
    pub variance: f64,
    pub ci_halfwidth: f64,
    pub extras: BTreeMap<String, f64>,
}

impl SummaryDocument {
    pub fn new(spec: EnsembleSpec, s: &SummaryStats) -> Self {
        SummaryDocument {
            spec,
            samples: s.samples,
            mean: s.mean,
            variance: s.variance,
            ci_halfwidth: s.ci_halfwidth,
            extras: s.extras.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_summary() {
        let s = SummaryStats::from_counts([1, 2, 3, 4]);
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(SummaryStats::from_counts([7]).variance, 0.0);
    }

    #[test]
    fn window_bounds() {
        let (lo, hi) = BulkWindow::default().bounds(100).unwrap();
        assert_eq!(lo, 0.8);
        assert!((hi - (1.0 - 0.04 * 100f64.ln())).abs() < 1e-15);
        assert!(BulkWindow::default().bounds(50).is_err());
    }

    #[test]
    fn slope_of_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|k| (k as f64, 2.0 * k as f64 - 1.0)).collect();
        assert!((least_squares_slope(&pts).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(least_squares_slope(&pts[..1]), None);
    }
}
