use std::path::Path;
use std::process::{Command, Output};

use kac_roots::experiments::{read_records_csv, SummaryStats};

fn kacroots(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kacroots")).args(args).env_remove("KACROOTS_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = kacroots(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

#[test]
fn asymptotic_expectation() {
    let out = ok(&["expect", "--degree", "100", "--asymptotic"]);
    let v: f64 = out.trim().parse().unwrap();
    assert!(out.starts_with("3.56384"), "{out}");
    assert!((v - 3.5638444).abs() < 1e-6);
}

#[test]
fn integrated_density() {
    let o = kacroots(&["density", "--degree", "200", "--from", "-0.5", "--to", "0.5", "--integrate", "--tol", "1e-8"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.3496991526).abs() < 1e-8, "{v}");
    assert!(stderr(&o).starts_with("err_est"));
}

#[test]
fn density_points_are_symmetric() {
    let out = ok(&["density", "--degree", "10", "--from", "-1", "--to", "1", "--points", "5"]);
    let rows: Vec<f64> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0], rows[4]);
    assert_eq!(rows[1], rows[3]);
    assert!((rows[2] - 1.0 / std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn simulate_to_stdout() {
    let out = ok(&["simulate", "--degree", "3", "--samples", "25", "--dist", "rademacher", "--seed", "9", "--out", "-"]);
    let records = read_records_csv(out.as_bytes()).unwrap();
    assert_eq!(records.len(), 25);
    for (i, r) in records.iter().enumerate() {
        assert_eq!(r.index, i as u64);
        assert_eq!(r.degree, 3);
        // Distinct roots; an even count means a repeated root, e.g. (1 + x)^2 (1 - x).
        assert!((1..=3).contains(&r.roots_total));
        assert_eq!(r.roots_total == 2, r.had_multiplicity);
        assert_eq!(r.roots_total, r.roots_in_query);
    }
}

#[test]
fn thread_count_does_not_change_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let path = dir.path().join(name);
        let o = Command::new(env!("CARGO_BIN_EXE_kacroots"))
            .args(["simulate", "--degree", "120", "--samples", "40", "--dist", "gaussian", "--seed", "5"])
            .args(["--interval=-0.9,0.9", "--out", path.to_str().unwrap()])
            .env("KACROOTS_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        std::fs::read(path).unwrap()
    };
    let one = run("1", "a.csv");
    assert_eq!(one, run("8", "b.csv"));
    let flag = ok(&["simulate", "--degree", "120", "--samples", "40", "--dist", "gaussian", "--seed", "5", "--interval=-0.9,0.9", "--out", "-", "--threads", "3"]);
    assert_eq!(one, flag.into_bytes());
}

#[test]
fn summary_matches_records() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("r.csv");
    let json = dir.path().join("s.json");
    ok(&[
        "simulate", "--degree", "30", "--samples", "60", "--dist", "three_point", "--seed", "11",
        "--out", csv.to_str().unwrap(), "--summary", json.to_str().unwrap(),
    ]);
    let records = read_records_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    let stats = SummaryStats::from_records(&records);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["M"], 60);
    assert_eq!(doc["spec"]["dist"], "three_point");
    assert_eq!(doc["mean"].as_f64().unwrap(), stats.mean);
    assert_eq!(doc["variance"].as_f64().unwrap(), stats.variance);
    assert_eq!(doc["ci_halfwidth"].as_f64().unwrap(), stats.ci_halfwidth);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"degree": 3, "samples": 5, "dist": "rademacher", "seed": 1, "out": "-"}"#).unwrap();
    let from_cfg = ok(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(read_records_csv(from_cfg.as_bytes()).unwrap().len(), 5);
    let overridden = ok(&["simulate", "--config", cfg.to_str().unwrap(), "--samples", "7"]);
    assert_eq!(read_records_csv(overridden.as_bytes()).unwrap().len(), 7);

    std::fs::write(&cfg, "not json").unwrap();
    assert_eq!(kacroots(&["expect", "--config", cfg.to_str().unwrap(), "--degree", "3"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let usage: &[&[&str]] = &[
        &["expect"],
        &["expect", "--degree", "0"],
        &["expect", "--degree", "x"],
        &["density", "--degree", "5", "--from", "1", "--to", "0", "--integrate"],
        &["density", "--degree", "5", "--from", "0", "--to", "1", "--points", "3", "--integrate"],
        &["simulate", "--degree", "3", "--samples", "0", "--dist", "gaussian", "--seed", "1", "--out", "-"],
        &["simulate", "--degree", "3", "--samples", "2", "--dist", "cauchy", "--seed", "1", "--out", "-"],
        &["simulate", "--degree", "3", "--samples", "2", "--dist", "gaussian", "--seed", "1", "--out", "-", "--interval", "2,1"],
        &["compare", "--degrees", "10:5:1", "--samples", "2", "--seed", "1", "--out", "-"],
        &["doubles", "--degree", "50", "--samples", "2", "--dist", "gaussian", "--seed", "1", "--out", "-"],
        &["truncate", "--degree", "50", "--keep", "60", "--interval", "0,1", "--samples", "2", "--dist", "gaussian", "--seed", "1"],
        &["truncate", "--degree", "50", "--interval", "0,1", "--samples", "2", "--dist", "gaussian", "--seed", "1"],
        &["edge", "--degree", "50", "--cap", "1", "--samples", "2", "--dist", "gaussian", "--seed", "1"],
        &["smallball", "--degree", "50", "--x", "0.5", "--gammas", "-1", "--samples", "2", "--dist", "gaussian", "--seed", "1"],
        &["simulate", "--degree", "3", "--samples", "2", "--dist", "gaussian", "--seed", "1", "--out", "-", "--threads", "0"],
    ];
    for args in usage {
        let o = kacroots(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error:"), "{err}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    let o = kacroots(&["expect", "--degree", "1000", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error estimate"));
    let o = kacroots(&["simulate", "--degree", "3", "--samples", "2", "--dist", "gaussian", "--seed", "1", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn truncate_and_edge_reports() {
    let out = ok(&["truncate", "--degree", "60", "--keep", "60", "--interval=-1,1", "--samples", "10", "--dist", "gaussian", "--seed", "4"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["identical_fraction"], 1.0);
    assert_eq!(v["difference"], 0.0);
    let out = ok(&["edge", "--degree", "60", "--cap", "3", "--samples", "10", "--dist", "rademacher", "--seed", "4"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["M"], 10);
    assert!(v["extras"]["edge_bound"].as_f64().unwrap() > 0.0);
}

#[test]
fn smallball_reports_slope() {
    let o = kacroots(&["smallball", "--degree", "40", "--x", "0.5", "--gammas", "1,0.1", "--samples", "400", "--dist", "gaussian", "--seed", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("gamma,hits,probability"));
    assert_eq!(out.lines().count(), 3);
    assert!(stderr(&o).starts_with("slope"));
}

fn compare(dir: &Path, name: &str) -> (String, String) {
    let svg = dir.join(name);
    let csv = ok(&["compare", "--degrees", "10:30:10", "--samples", "30", "--seed", "3", "--out", "-", "--svg", svg.to_str().unwrap()]);
    (csv, std::fs::read_to_string(svg).unwrap())
}

#[test]
fn compare_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, svg) = compare(dir.path(), "a.svg");
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("degree,mean_gaussian"));
    for (line, n) in lines[1..].iter().zip([10, 20, 30]) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(f[0], n as f64);
        assert!((f[7] - (f[1] - f[4])).abs() < 1e-12);
    }
    assert!(svg.starts_with("<?xml"));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert_eq!(svg.matches("<circle").count(), 6);
    assert!(svg.contains(">gaussian</text>") && svg.contains(">rademacher</text>"));
    assert_eq!(compare(dir.path(), "b.svg"), (csv, svg));
}
