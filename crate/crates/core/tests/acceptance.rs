//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain
//! binary (no libtest harness) so the lines are always printed; the process
//! fails if any criterion fails.

mod common;

use std::f64::consts::{FRAC_1_PI, PI};
use std::time::Instant;

use kac_roots::density::{asymptotic_expectation, density, expected_roots, DensityQuery};
use kac_roots::ensembles::{Distribution, EnsembleSpec};
use kac_roots::experiments::*;
use kac_roots::root_count::{count_roots, count_roots_descartes, isolate_roots, RootRange};
use kac_roots::{Dyadic, IntPolynomial};
use rand_core::Rng;
use rand_pcg::Pcg64;

const SEED_BAND: u64 = 0x5eed_0005;
const SEED_GAP: u64 = 0x5eed_0006;
const SEED_BACKENDS: u128 = 0x5eed_0009;
const SEED_DOUBLES: u64 = 0x5eed_0010;
const SEED_TRUNCATION: u64 = 0x5eed_0011;
const SEED_SMALLBALL: u64 = 0x5eed_0012;

struct Report {
    failures: Vec<u32>,
    /// Rademacher samples drawn so far and roots found in (-1/2, 1/2).
    zone_samples: usize,
    zone_roots: usize,
}

impl Report {
    fn record(&mut self, id: u32, pass: bool, detail: String, started: Instant) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2}: {verdict} ({:.1}s) {detail}", started.elapsed().as_secs_f64());
        if !pass {
            self.failures.push(id);
        }
    }
}

fn spec(dist: Distribution, n: usize, seed: u64) -> EnsembleSpec {
    EnsembleSpec::new(dist, n, seed).unwrap()
}

fn criterion_1(rep: &mut Report) {
    let t = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for n in [100usize, 1000, 10_000] {
        let q = expected_roots(&DensityQuery::full_line(n)).unwrap();
        let diff = (q.value - asymptotic_expectation(n)).abs();
        let tol = 10.0 / (n * n) as f64 + 1e-6;
        pass &= diff <= tol;
        detail.push(format!("n={n}: E={:.12} |diff|={diff:.2e} tol={tol:.2e}", q.value));
    }
    rep.record(1, pass, detail.join("; "), t);
}

fn criterion_2(rep: &mut Report) {
    let t = Instant::now();
    let q = expected_roots(&DensityQuery::new(200, -0.5, 0.5)).unwrap();
    let want = 3f64.ln() / PI;
    let diff = (q.value - want).abs();
    rep.record(2, diff <= 1e-6, format!("value={:.10} target={want:.10} |diff|={diff:.2e}", q.value), t);
}

fn criterion_3(rep: &mut Report) {
    let t = Instant::now();
    let mut pass = true;
    let mut worst = 0.0f64;
    for n in [2usize, 10, 100, 1000] {
        let closed = FRAC_1_PI * ((n * (n + 2)) as f64 / 12.0).sqrt();
        let oracle = common::endpoint_oracle(n, 1e-7);
        let got = density(n, 1.0).unwrap();
        for rel in [(got - closed).abs() / closed, (oracle - closed).abs() / closed] {
            worst = worst.max(rel);
            pass &= rel <= 1e-10;
        }
    }
    rep.record(3, pass, format!("worst relative error {worst:.2e} (density and extrapolated exact oracle)"), t);
}

/// Runs the O(1)-band experiment and returns the Gaussian n = 100 summary.
fn criterion_5(rep: &mut Report) -> SummaryStats {
    let t = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    let mut gauss100 = None;
    for dist in Distribution::ALL {
        for n in [100usize, 1000] {
            let run = run_expectation(&spec(dist, n, SEED_BAND), 10_000, &SampleQuery::full_line()).unwrap();
            if dist == Distribution::Rademacher {
                rep.zone_samples += run.records.len();
                rep.zone_roots += run.exclusion_zone_roots;
            }
            let dev = run.summary.mean - 2.0 / PI * (n as f64).ln();
            pass &= dev.abs() <= 1.0;
            detail.push(format!("{dist}/{n}: mean={:.4} dev={dev:+.4}", run.summary.mean));
            if dist == Distribution::Gaussian && n == 100 {
                gauss100 = Some(run.summary);
            }
        }
    }
    rep.record(5, pass, detail.join("; "), t);
    gauss100.unwrap()
}

fn criterion_4(rep: &mut Report, s: &SummaryStats) {
    let t = Instant::now();
    let target = asymptotic_expectation(100);
    let diff = (s.mean - target).abs();
    rep.record(
        4,
        diff <= 3.0 * s.ci_halfwidth,
        format!("mean={:.4} target={target:.5} |diff|={diff:.4} 3ci={:.4} (M={})", s.mean, 3.0 * s.ci_halfwidth, s.samples),
        t,
    );
}

fn criteria_6_7(rep: &mut Report) {
    let t = Instant::now();
    let rows = run_gap(&[50, 100, 200, 400], 20_000, SEED_GAP).unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    for r in &rows {
        rep.zone_samples += r.rademacher.samples;
        rep.zone_roots += r.exclusion_zone_roots;
        pass &= (0.25..=0.55).contains(&r.gap);
        detail.push(format!("n={}: gap={:.4}", r.degree, r.gap));
    }
    rep.record(6, pass, detail.join("; "), t);

    let t = Instant::now();
    let target = 4.0 / PI * (1.0 - 2.0 / PI) * 200f64.ln();
    let r200 = rows.iter().find(|r| r.degree == 200).unwrap();
    let mut pass = true;
    let mut detail = vec![format!("target={target:.4}")];
    for (name, s) in [("gaussian", &r200.gaussian), ("rademacher", &r200.rademacher)] {
        let rel = (s.variance - target).abs() / target;
        pass &= rel <= 0.25;
        detail.push(format!("{name}: var={:.4} rel={rel:.3}", s.variance));
    }
    rep.record(7, pass, detail.join("; "), t);
}

fn criterion_9(rep: &mut Report) {
    let t = Instant::now();
    let mut rng = Pcg64::new(SEED_BACKENDS, 0);
    let mut mismatches = 0;
    let real_line = RootRange::real_line();
    for _ in 0..100_000 {
        let deg = (rng.next_u64() % 13) as usize;
        let coeffs: Vec<i64> = loop {
            let c: Vec<i64> = (0..=deg).map(|_| (rng.next_u64() % 19) as i64 - 9).collect();
            if c.iter().any(|&x| x != 0) {
                break c;
            }
        };
        let p = IntPolynomial::from_i64s(&coeffs);
        let s = count_roots(&p, &real_line).unwrap();
        let d = count_roots_descartes(&p, &real_line).unwrap();
        let i = isolate_roots(&p, &real_line, &Dyadic::pow2(-8)).unwrap().count();
        if s != d || s != i {
            mismatches += 1;
        }
    }
    rep.record(9, mismatches == 0, format!("100000 polynomials, {mismatches} disagreements"), t);
}

fn criterion_10(rep: &mut Report) {
    let t = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for dist in [Distribution::Rademacher, Distribution::Gaussian] {
        let run = run_doubles(&spec(dist, 100, SEED_DOUBLES), 10_000, BulkWindow::default(), &DEFAULT_THRESHOLDS).unwrap();
        if dist == Distribution::Rademacher {
            rep.zone_samples += run.records.len();
            rep.zone_roots += run.exclusion_zone_roots;
        }
        let ladder: Vec<String> =
            run.rows.iter().map(|r| format!("(n^-{}, n^-{}):{}", r.deriv_exp, r.gap_exp, r.violations)).collect();
        let main = run.rows.iter().find(|r| r.deriv_exp == 8.0 && r.gap_exp == 12.0).unwrap();
        pass &= main.fraction <= 1e-3;
        let with_roots = run.records.iter().filter(|r| r.roots_in_query > 0).count();
        detail.push(format!("{dist}: fraction={} [{}] samples with bulk roots={with_roots}", main.fraction, ladder.join(" ")));
    }
    rep.record(10, pass, detail.join("; "), t);
}

fn criterion_11(rep: &mut Report) {
    let t = Instant::now();
    let (n, r) = (2000, 0.2);
    let m = coupled_truncation_degree(n, r, DEFAULT_COUPLING_B).unwrap();
    // J = (1 - 1/B0, 1 - r] with 1/B0 = 0.5.
    let (a, b) = (0.5, 1.0 - r);
    let run = run_truncation(&spec(Distribution::Gaussian, n, SEED_TRUNCATION), 10_000, m, a, b).unwrap();
    let bound = 1.0 / m as f64 + 3.0 * run.paired.ci_halfwidth;
    let pass = run.difference <= bound && run.identical_fraction >= 0.99;
    rep.record(
        11,
        pass,
        format!(
            "m={m} J=({a}, {b}] mean_n={:.4} mean_m={:.4} |diff|={:.5} bound={bound:.5} identical={:.4}",
            run.full.mean, run.truncated.mean, run.difference, run.identical_fraction
        ),
        t,
    );
}

fn criterion_12(rep: &mut Report) {
    let t = Instant::now();
    let run = run_smallball(&spec(Distribution::Rademacher, 100, SEED_SMALLBALL), 100_000, 0.9, &[1e-1, 1e-2, 1e-3, 1e-4])
        .unwrap();
    rep.zone_samples += 100_000;
    rep.zone_roots += run.exclusion_zone_roots;
    let probs: Vec<String> = run.rows.iter().map(|r| format!("{:e}:{}", r.gamma, r.probability)).collect();
    let pass = run.slope.is_some_and(|s| s >= 0.8);
    rep.record(12, pass, format!("slope={:?} [{}]", run.slope, probs.join(" ")), t);
}

fn criterion_8(rep: &mut Report) {
    let t = Instant::now();
    rep.record(
        8,
        rep.zone_roots == 0,
        format!("{} Rademacher samples, {} roots in (-1/2, 1/2)", rep.zone_samples, rep.zone_roots),
        t,
    );
}

fn main() {
    let mut rep = Report { failures: Vec::new(), zone_samples: 0, zone_roots: 0 };
    criterion_1(&mut rep);
    criterion_2(&mut rep);
    criterion_3(&mut rep);
    let gauss100 = criterion_5(&mut rep);
    criterion_4(&mut rep, &gauss100);
    criteria_6_7(&mut rep);
    criterion_9(&mut rep);
    criterion_10(&mut rep);
    criterion_11(&mut rep);
    criterion_12(&mut rep);
    criterion_8(&mut rep);
    if !rep.failures.is_empty() {
        println!("acceptance: failed criteria {:?}", rep.failures);
        std::process::exit(1);
    }
    println!("acceptance: all 12 criteria passed");
}
