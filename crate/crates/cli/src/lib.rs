//! `kacroots` command-line front end.
//!
//! Exit codes: 0 on success, 2 on usage errors (bad flags, invalid
//! combinations, unreadable config), 1 on runtime failures (including
//! quadrature tolerance failures, reported with their error estimate).

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{ArgGroup, Args, Parser, Subcommand};
use kac_roots::density::{asymptotic_expectation, density, expected_roots, DensityQuery, DEFAULT_REL_TOL};
use kac_roots::ensembles::{Distribution, EnsembleSpec};
use kac_roots::experiments::{
    coupled_radius, coupled_truncation_degree, run_doubles, run_edge, run_expectation, run_gap, run_smallball,
    run_truncation, write_records_csv, BulkWindow, SampleQuery, SummaryDocument, DEFAULT_COUPLING_B,
    DEFAULT_THRESHOLDS,
};
use kac_roots::root_count::RootRange;
use serde::Serialize;

pub mod svg;

/// Environment variable with the default worker thread count.
pub const THREADS_ENV: &str = "KACROOTS_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<kac_roots::Error> for CliError {
    fn from(e: kac_roots::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn io_error(path: &Path, e: io::Error) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

/// `A,B`: the half-open interval `(A, B]`; `inf` / `-inf` allowed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval(pub f64, pub f64);

impl FromStr for Interval {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected A,B but got '{s}'"))?;
        let parse = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("'{v}' is not a number"));
        let (a, b) = (parse(a)?, parse(b)?);
        if a.is_nan() || b.is_nan() || a >= b {
            return Err(format!("interval needs A < B, got {a},{b}"));
        }
        Ok(Interval(a, b))
    }
}

/// `LO:HI:STEP`, inclusive of `HI` when it lies on the grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeGrid {
    pub lo: usize,
    pub hi: usize,
    pub step: usize,
}

impl DegreeGrid {
    pub fn degrees(&self) -> Vec<usize> {
        (self.lo..=self.hi).step_by(self.step).collect()
    }
}

impl FromStr for DegreeGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(format!("expected LO:HI:STEP but got '{s}'"));
        };
        let num = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("'{v}' is not a nonnegative integer"));
        let g = DegreeGrid { lo: num(lo)?, hi: num(hi)?, step: num(step)? };
        if g.lo == 0 || g.step == 0 || g.lo > g.hi {
            return Err(format!("need 1 <= LO <= HI and STEP >= 1, got '{s}'"));
        }
        Ok(g)
    }
}

fn parse_dist(s: &str) -> Result<Distribution, String> {
    s.parse::<Distribution>().map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "kacroots", version, about = "Real-root statistics of random Kac polynomials", args_override_self = true)]
pub struct Cli {
    /// JSON file whose keys mirror the subcommand's flags; flags given on the
    /// command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Sampling {
    /// Number of samples M.
    #[arg(long)]
    pub samples: usize,
    /// Coefficient distribution: gaussian, rademacher, uniform_pm1 or three_point.
    #[arg(long, value_parser = parse_dist)]
    pub dist: Distribution,
    /// Master seed.
    #[arg(long)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct Threads {
    /// Worker threads (default: all cores).
    #[arg(long, env = THREADS_ENV)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct Window {
    /// Bulk window left margin: the window starts at 1 - b0inv.
    #[arg(long, default_value_t = 0.2)]
    pub b0inv: f64,
    /// Bulk window log factor: the window ends at 1 - b1 ln(n)/n.
    #[arg(long, default_value_t = 4.0)]
    pub b1: f64,
}

impl Window {
    fn get(&self) -> BulkWindow {
        BulkWindow { b0_inv: self.b0inv, b1: self.b1 }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate or integrate the Gaussian real-root density.
    #[command(group(ArgGroup::new("mode").args(["points", "integrate"])))]
    Density {
        #[arg(long)]
        degree: usize,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Print the density at K equally spaced points (default 11).
        #[arg(long, value_name = "K")]
        points: Option<usize>,
        /// Print the expected number of roots in [from, to].
        #[arg(long)]
        integrate: bool,
        /// Relative tolerance for --integrate.
        #[arg(long, default_value_t = DEFAULT_REL_TOL, requires = "integrate")]
        tol: f64,
    },
    /// Expected number of real roots of a degree-N Gaussian polynomial.
    Expect {
        #[arg(long)]
        degree: usize,
        /// Use the large-n expansion instead of quadrature.
        #[arg(long)]
        asymptotic: bool,
        #[arg(long, default_value_t = DEFAULT_REL_TOL, conflicts_with = "asymptotic")]
        tol: f64,
    },
    /// Per-sample root counts as CSV.
    Simulate {
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        sampling: Sampling,
        /// Query interval (A, B]; default the whole line.
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<Interval>,
        /// CSV output path, or - for standard output.
        #[arg(long)]
        out: String,
        /// JSON summary output path.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        window: Window,
        #[command(flatten)]
        threads: Threads,
    },
    /// Gaussian versus Rademacher mean counts over a degree grid.
    Compare {
        #[arg(long)]
        degrees: DegreeGrid,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: String,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        threads: Threads,
    },
    /// Near-double-root diagnostics on the bulk window.
    Doubles {
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        out: String,
        #[command(flatten)]
        threads: Threads,
    },
    /// Empirical small-ball probabilities P(|P(x)| <= gamma).
    Smallball {
        #[arg(long)]
        degree: usize,
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        gammas: Vec<f64>,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        threads: Threads,
    },
    /// Root counts of P_n and its truncation P_m on an interval.
    #[command(group(ArgGroup::new("cut").args(["keep", "radius"]).required(true)))]
    Truncate {
        #[arg(long)]
        degree: usize,
        /// Truncation degree m.
        #[arg(long)]
        keep: Option<usize>,
        /// Radius r; m = ceil(4 B ln(n) / r).
        #[arg(long)]
        radius: Option<f64>,
        /// Coupling exponent B.
        #[arg(long, default_value_t = DEFAULT_COUPLING_B)]
        coupling: f64,
        #[arg(long, allow_hyphen_values = true)]
        interval: Interval,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        threads: Threads,
    },
    /// Roots in the edge region [0, 1 - 1/C).
    Edge {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        cap: f64,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        threads: Threads,
    },
}

const SUBCOMMANDS: [&str; 8] = ["density", "expect", "simulate", "compare", "doubles", "smallball", "truncate", "edge"];

/// Finds `--config FILE` / `--config=FILE` in the raw arguments.
fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Config keys become flags placed before the user's own, so that with
/// `args_override_self` the command line wins.
fn config_args(path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("config {} is not valid JSON: {e}", path.display())))?;
    let obj = value.as_object().ok_or_else(|| usage(format!("config {} must be a JSON object", path.display())))?;
    let scalar = |v: &serde_json::Value| -> Result<String, CliError> {
        match v {
            serde_json::Value::String(s) => Ok(s.clone()),
            serde_json::Value::Number(n) => Ok(n.to_string()),
            other => Err(usage(format!("config value {other} is not a string or number"))),
        }
    };
    let mut out = Vec::new();
    for (key, v) in obj {
        if key == "config" {
            return Err(usage("config files cannot nest --config"));
        }
        let flag = format!("--{key}");
        match v {
            serde_json::Value::Bool(true) => out.push(flag.into()),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                out.push(format!("{flag}={}", parts.join(",")).into());
            }
            other => out.push(format!("{flag}={}", scalar(other)?).into()),
        }
    }
    Ok(out)
}

/// Parses `argv` (including the program name), merging any config file.
pub fn parse(argv: Vec<OsString>) -> Result<Cli, clap::Error> {
    let mut argv = argv;
    if let Some(path) = config_path(&argv[1.min(argv.len())..]) {
        let extra = match config_args(&path) {
            Ok(extra) => extra,
            Err(e) => return Err(clap::Error::raw(clap::error::ErrorKind::InvalidValue, format!("{e}\n"))),
        };
        if let Some(pos) = argv.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref())) {
            argv.splice(pos + 1..pos + 1, extra);
        }
    }
    Cli::try_parse_from(argv)
}

/// Entry point; returns the process exit code.
pub fn main_with_args(argv: Vec<OsString>) -> i32 {
    let cli = match parse(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            let rendered = e.render().to_string();
            let line = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("error: invalid usage");
            eprintln!("{}", if line.starts_with("error:") { line.to_string() } else { format!("error: {line}") });
            return 2;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(usage(msg()))
    }
}

fn check_degree(n: usize) -> Result<(), CliError> {
    check(n >= 1, || "--degree must be at least 1".into())
}

fn check_samples(m: usize) -> Result<(), CliError> {
    check(m >= 1, || "--samples must be at least 1".into())
}

fn spec(degree: usize, s: &Sampling) -> Result<EnsembleSpec, CliError> {
    check_degree(degree)?;
    check_samples(s.samples)?;
    EnsembleSpec::new(s.dist, degree, s.seed).map_err(|e| usage(e.to_string()))
}

fn query_range(iv: Option<Interval>) -> Result<RootRange, CliError> {
    match iv {
        None => Ok(RootRange::real_line()),
        Some(Interval(a, b)) => RootRange::half_open_f64(a, b).map_err(|e| usage(format!("--interval: {e}"))),
    }
}

/// Sets the global worker count; only the first call in a process has effect.
fn setup_threads(t: &Threads) -> Result<(), CliError> {
    if let Some(n) = t.threads {
        check(n >= 1, || "--threads must be at least 1".into())?;
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// `-` is standard output.
fn open_out(out: &str) -> Result<Box<dyn Write>, CliError> {
    if out == "-" {
        return Ok(Box::new(BufWriter::new(io::stdout().lock())));
    }
    let path = Path::new(out);
    let f = File::create(path).map_err(|e| io_error(path, e))?;
    Ok(Box::new(BufWriter::new(f)))
}

/// Side reports go to stdout unless stdout carries the data.
fn report(out: &str, line: &str) {
    if out == "-" {
        eprintln!("{line}");
    } else {
        println!("{line}");
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| io_error(path, e))
}

fn print_json(value: &impl Serialize) -> Result<(), CliError> {
    println!("{}", serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?);
    Ok(())
}

fn quadrature_failure(e: kac_roots::Error) -> CliError {
    match e {
        kac_roots::Error::ToleranceNotMet { value, err_est, requested } => CliError::Runtime(format!(
            "quadrature missed the requested tolerance {requested:e}: value {value} with error estimate {err_est:e}"
        )),
        other => other.into(),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Density { degree, from, to, points, integrate, tol } => {
            check_degree(degree)?;
            check(!from.is_nan() && !to.is_nan() && from <= to, || format!("--from {from} must not exceed --to {to}"))?;
            if integrate {
                check(tol > 0.0, || "--tol must be positive".into())?;
                let r = expected_roots(&DensityQuery::new(degree, from, to).with_rel_tol(tol)).map_err(quadrature_failure)?;
                println!("{}", r.value);
                eprintln!("err_est {:e}", r.err_est);
            } else {
                let k = points.unwrap_or(11);
                check(k >= 1, || "--points must be at least 1".into())?;
                check(from.is_finite() && to.is_finite(), || "--points needs finite --from and --to".into())?;
                let mut w = csv::Writer::from_writer(io::stdout().lock());
                let err = |e: csv::Error| CliError::Runtime(e.to_string());
                w.write_record(["t", "density"]).map_err(err)?;
                for i in 0..k {
                    let t = if k == 1 { from } else { from + (to - from) * i as f64 / (k - 1) as f64 };
                    w.write_record([t.to_string(), density(degree, t)?.to_string()]).map_err(err)?;
                }
                w.flush().map_err(|e| CliError::Runtime(e.to_string()))?;
            }
        }
        Command::Expect { degree, asymptotic, tol } => {
            check_degree(degree)?;
            if asymptotic {
                println!("{}", asymptotic_expectation(degree));
            } else {
                check(tol > 0.0, || "--tol must be positive".into())?;
                let r = expected_roots(&DensityQuery::full_line(degree).with_rel_tol(tol)).map_err(quadrature_failure)?;
                println!("{}", r.value);
            }
        }
        Command::Simulate { degree, sampling, interval, out, summary, window, threads } => {
            let spec = spec(degree, &sampling)?;
            let interval = query_range(interval)?;
            setup_threads(&threads)?;
            let w = window.get();
            // Bulk diagnostics only where the window is nonempty.
            let bulk = w.bounds(degree).ok().map(|_| w);
            let run = run_expectation(&spec, sampling.samples, &SampleQuery { interval, bulk })?;
            let mut sink = open_out(&out)?;
            write_records_csv(&mut sink, &run.records)?;
            sink.flush().map_err(|e| CliError::Runtime(e.to_string()))?;
            let doc = SummaryDocument::new(spec, &run.summary);
            if let Some(path) = summary {
                write_json(&path, &doc)?;
            }
            report(&out, &format!("mean {} variance {} ci_halfwidth {}", doc.mean, doc.variance, doc.ci_halfwidth));
        }
        Command::Compare { degrees, samples, seed, out, svg, threads } => {
            check_samples(samples)?;
            setup_threads(&threads)?;
            let rows = run_gap(&degrees.degrees(), samples, seed)?;
            let mut w = csv::Writer::from_writer(open_out(&out)?);
            let err = |e: csv::Error| CliError::Runtime(e.to_string());
            w.write_record([
                "degree",
                "mean_gaussian",
                "ci_gaussian",
                "var_gaussian",
                "mean_rademacher",
                "ci_rademacher",
                "var_rademacher",
                "gap",
            ])
            .map_err(err)?;
            for r in &rows {
                w.write_record([
                    r.degree.to_string(),
                    r.gaussian.mean.to_string(),
                    r.gaussian.ci_halfwidth.to_string(),
                    r.gaussian.variance.to_string(),
                    r.rademacher.mean.to_string(),
                    r.rademacher.ci_halfwidth.to_string(),
                    r.rademacher.variance.to_string(),
                    r.gap.to_string(),
                ])
                .map_err(err)?;
            }
            w.flush().map_err(|e| CliError::Runtime(e.to_string()))?;
            if let Some(path) = svg {
                let series = |name: &str, f: &dyn Fn(&kac_roots::experiments::GapRow) -> f64| svg::Series {
                    label: name.to_string(),
                    points: rows.iter().map(|r| (r.degree as f64, f(r))).collect(),
                };
                let chart = svg::Chart {
                    title: format!("Sample mean number of real roots ({samples} samples per point)"),
                    x_label: "degree n".into(),
                    y_label: "mean number of real roots".into(),
                    series: vec![series("gaussian", &|r| r.gaussian.mean), series("rademacher", &|r| r.rademacher.mean)],
                };
                svg::emit_svg(&chart, &path)?;
            }
        }
        Command::Doubles { degree, sampling, window, out, threads } => {
            let spec = spec(degree, &sampling)?;
            let w = window.get();
            w.bounds(degree).map_err(|e| usage(e.to_string()))?;
            setup_threads(&threads)?;
            let run = run_doubles(&spec, sampling.samples, w, &DEFAULT_THRESHOLDS)?;
            let mut sink = open_out(&out)?;
            write_records_csv(&mut sink, &run.records)?;
            sink.flush().map_err(|e| CliError::Runtime(e.to_string()))?;
            report(&out, "deriv_exp,gap_exp,violations,fraction");
            for r in &run.rows {
                report(&out, &format!("{},{},{},{}", r.deriv_exp, r.gap_exp, r.violations, r.fraction));
            }
        }
        Command::Smallball { degree, x, gammas, sampling, threads } => {
            let spec = spec(degree, &sampling)?;
            check(x.is_finite(), || "--x must be finite".into())?;
            check(gammas.iter().all(|g| g.is_finite() && *g >= 0.0), || "--gammas must be finite and >= 0".into())?;
            setup_threads(&threads)?;
            let run = run_smallball(&spec, sampling.samples, x, &gammas)?;
            println!("gamma,hits,probability");
            for r in &run.rows {
                println!("{},{},{}", r.gamma, r.hits, r.probability);
            }
            match run.slope {
                Some(s) => eprintln!("slope {s}"),
                None => eprintln!("slope undefined (fewer than two gammas with hits)"),
            }
        }
        Command::Truncate { degree, keep, radius, coupling, interval, sampling, threads } => {
            let spec = spec(degree, &sampling)?;
            let m = match (keep, radius) {
                (Some(m), _) => m,
                (None, Some(r)) => coupled_truncation_degree(degree, r, coupling).map_err(|e| usage(e.to_string()))?,
                (None, None) => unreachable!("clap requires one of --keep and --radius"),
            };
            check(m <= degree, || format!("truncation degree {m} exceeds --degree {degree}"))?;
            query_range(Some(interval))?;
            setup_threads(&threads)?;
            let run = run_truncation(&spec, sampling.samples, m, interval.0, interval.1)?;
            #[derive(Serialize)]
            struct Out {
                degree: usize,
                keep: usize,
                radius: f64,
                interval: [f64; 2],
                samples: usize,
                mean_n: f64,
                mean_m: f64,
                difference: f64,
                paired_ci_halfwidth: f64,
                identical_fraction: f64,
            }
            print_json(&Out {
                degree,
                keep: m,
                radius: radius.unwrap_or_else(|| coupled_radius(degree, m, coupling)),
                interval: [interval.0, interval.1],
                samples: sampling.samples,
                mean_n: run.full.mean,
                mean_m: run.truncated.mean,
                difference: run.difference,
                paired_ci_halfwidth: run.paired.ci_halfwidth,
                identical_fraction: run.identical_fraction,
            })?;
        }
        Command::Edge { degree, cap, sampling, threads } => {
            let spec = spec(degree, &sampling)?;
            check(cap > 1.0 && cap.is_finite(), || "--cap must be a finite number > 1".into())?;
            setup_threads(&threads)?;
            let s = run_edge(&spec, sampling.samples, cap)?;
            print_json(&SummaryDocument::new(spec, &s))?;
        }
    }
    Ok(())
}
