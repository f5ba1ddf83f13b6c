use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brokenline")).args(args).output().expect("binary runs")
}

fn run_seeded(seed: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brokenline"))
        .env("BROKENLINE_SEED", seed)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn breakpoints(v: &Value) -> Vec<(f64, f64)> {
    v["breakpoints"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| (b["t"].as_f64().unwrap(), b["v"].as_f64().unwrap()))
        .collect()
}

const TENT: &str = "x,f\n0,0\n1,1\n3,1\n4,0\n";

#[test]
fn fit_recovers_the_tent() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "tent.csv", TENT);
    let v = json(&run(&["fit", "--input", s(&input), "--k", "1", "--p", "2"]));
    assert!(v["error"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["p"], "2");
    assert_eq!(v["k"], 1);
    assert_eq!(v["proper_knots"], 1);
    let config = v["config"].as_array().unwrap();
    assert_eq!(config.len(), 1);
    assert_eq!(config[0]["kind"], "gap");
    assert_eq!(config[0]["q"], 1);
    assert!((config[0]["t"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    let bps = breakpoints(&v);
    assert_eq!(bps.len(), 3);
    assert!((bps[1].0 - 2.0).abs() < 1e-12);
}

#[test]
fn svg_marks_the_interior_knot_with_a_double_circle() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "tent.csv", TENT);
    let svg = dir.path().join("out.svg");
    let out = run(&["fit", "--input", s(&input), "--k", "1", "--p", "2", "--emit-svg", s(&svg)]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert_eq!(text.matches("class=\"knot-interior\"").count(), 1);
    assert_eq!(text.matches("class=\"knot-data\"").count(), 0);
    assert_eq!(text.matches("class=\"data\"").count(), 4);
}

#[test]
fn twelve_inner_points_three_knots_chebyshev_is_fast() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("random.csv");
    assert_eq!(code(&run_seeded("12", &["fixture", "random", "--mu", "12", "--output", s(&input)])), 0);
    let start = Instant::now();
    let v = json(&run(&["fit", "--input", s(&input), "--k", "3", "--p", "inf"]));
    assert!(start.elapsed() < Duration::from_secs(10), "{:?}", start.elapsed());
    assert_eq!(breakpoints(&v).len() - 2, v["config"].as_array().unwrap().len());
}

#[test]
fn fit_output_verifies_and_round_trips_the_error() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("random.csv");
    assert_eq!(code(&run_seeded("5", &["fixture", "random", "--mu", "9", "--output", s(&input)])), 0);
    for p in ["1", "2", "inf"] {
        let fit_path = dir.path().join(format!("fit{p}.json"));
        let out = run(&["fit", "--input", s(&input), "--k", "2", "--p", p, "--output", s(&fit_path)]);
        assert_eq!(code(&out), 0);
        let fit: Value = serde_json::from_str(&std::fs::read_to_string(&fit_path).unwrap()).unwrap();
        let report = json(&run(&["verify", "--input", s(&input), "--spline", s(&fit_path), "--p", p]));
        assert_eq!(report["all_pass"], true);
        let (a, b) = (fit["error"].as_f64().unwrap(), report["error"].as_f64().unwrap());
        assert!((a - b).abs() <= 1e-12 * (1.0 + a), "{p}: {a} vs {b}");
    }
}

#[test]
fn remark1_fixture_fails_verification_and_regularizes_to_one() {
    let dir = TempDir::new().unwrap();
    let data = dir.path().join("data.csv");
    let spline = dir.path().join("spline.json");
    let out = run(&["fixture", "remark1", "--i", "10", "--data-out", s(&data), "--output", s(&spline)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&spline).unwrap()).unwrap();
    assert_eq!(breakpoints(&v), vec![(-1.0, 1.0), (-0.1, 0.1), (0.5, 5.5), (1.0, 1.0)]);

    let verify = run(&["verify", "--input", s(&data), "--spline", s(&spline), "--p", "2"]);
    assert_eq!(code(&verify), 3);
    let report: Value = serde_json::from_slice(&verify.stdout).unwrap();
    assert_eq!(report["all_pass"], false);

    let reg = json(&run(&["regularize", "--input", s(&data), "--spline", s(&spline)]));
    let bps = breakpoints(&reg);
    assert_eq!((bps[0].0, bps[bps.len() - 1].0), (-1.0, 1.0));
    assert!(bps.iter().all(|&(_, v)| (v - 1.0).abs() <= 1e-12), "{bps:?}");
}

#[test]
fn oracle_never_beats_the_fit() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("random.csv");
    assert_eq!(code(&run_seeded("21", &["fixture", "random", "--mu", "8", "--output", s(&input)])), 0);
    for p in ["1", "2", "inf"] {
        let fit = json(&run(&["fit", "--input", s(&input), "--k", "2", "--p", p]));
        let oracle = json(&run(&["oracle", "--input", s(&input), "--k", "2", "--p", p, "--grid", "16"]));
        assert_eq!(oracle["grid"], 16);
        let (e, o) = (fit["error"].as_f64().unwrap(), oracle["error"].as_f64().unwrap());
        assert!(e <= o + 1e-12 * (1.0 + o), "{p}: fit {e} oracle {o}");
    }
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("random.csv");
    assert_eq!(code(&run_seeded("3", &["fixture", "random", "--mu", "10", "--output", s(&input)])), 0);
    let args = ["fit", "--input", s(&input), "--k", "3", "--p", "1"];
    let a = run(&args);
    let b = run(&args);
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, one.stdout);
    assert_eq!(a.stdout, four.stdout);
}

#[test]
fn random_fixture_follows_the_seed() {
    let a = run_seeded("7", &["fixture", "random", "--mu", "6"]);
    let b = run_seeded("7", &["fixture", "random", "--mu", "6"]);
    let c = run_seeded("8", &["fixture", "random", "--mu", "6"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(String::from_utf8_lossy(&a.stdout).lines().count(), 1 + 8);
    assert_eq!(code(&run_seeded("seven", &["fixture", "random"])), 2);
}

#[test]
fn sampled_fixture_is_fitted_exactly() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("sampled.csv");
    assert_eq!(code(&run_seeded("4", &["fixture", "random", "--mu", "9", "--k", "2", "--output", s(&input)])), 0);
    let v = json(&run(&["fit", "--input", s(&input), "--k", "2", "--p", "2"]));
    assert!(v["error"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn bad_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.csv", TENT);
    let cases = [
        write(&dir, "disorder.csv", "0,0\n2,1\n1,1\n"),
        write(&dir, "duplicate.csv", "0,0\n1,1\n1,2\n"),
        write(&dir, "nan.csv", "0,0\n1,NaN\n2,1\n"),
        write(&dir, "text.csv", "0,0\n1,one\n"),
        dir.path().join("missing.csv"),
    ];
    for input in &cases {
        let out = run(&["fit", "--input", s(input), "--k", "1", "--p", "2"]);
        assert_eq!(code(&out), 2, "{}", input.display());
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(code(&run(&["fit", "--input", s(&good), "--k", "1", "--p", "0.5"])), 2);
    assert_eq!(code(&run(&["fit", "--input", s(&good), "--k", "-1", "--p", "2"])), 2);
    assert_eq!(code(&run(&["oracle", "--input", s(&good), "--k", "1", "--p", "2", "--grid", "0"])), 2);
}

#[test]
fn verify_rejects_mismatched_domains() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "tent.csv", TENT);
    let spline = write(&dir, "s.json", "{\"breakpoints\":[{\"t\":0,\"v\":0},{\"t\":5,\"v\":1}]}");
    assert_eq!(code(&run(&["verify", "--input", s(&input), "--spline", s(&spline), "--p", "2"])), 2);
    let broken = write(&dir, "b.json", "{\"breakpoints\":[");
    assert_eq!(code(&run(&["verify", "--input", s(&input), "--spline", s(&broken), "--p", "2"])), 2);
}

#[test]
fn csv_output_lists_breakpoints() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "tent.csv", TENT);
    let out = run(&["fit", "--input", s(&input), "--k", "1", "--p", "inf", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "t,v");
    assert_eq!(rows.len(), 4);
    let mid: Vec<f64> = rows[2].split(',').map(|c| c.parse().unwrap()).collect();
    assert!((mid[0] - 2.0).abs() < 1e-12 && (mid[1] - 2.0).abs() < 1e-12, "{mid:?}");
}
