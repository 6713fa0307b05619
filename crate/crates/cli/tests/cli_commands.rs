use std::path::PathBuf;
use std::process::{Command, Output};

use heisenberg_lorentz::ExtremalParams;
use serde_json::Value;

fn hlor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlor")).args(args).output().expect("hlor runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn json(args: &[&str]) -> Value {
    let out = hlor(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    let errors: Vec<String> = validator().iter_errors(&report).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}");
    report
}

fn validator() -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schemas/run_report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect()
}

#[test]
fn abnormal_p2_csv() {
    let out = hlor(&["extremal", "--problem", "2", "--case", "abnormal", "--params", "h2_0=0,h3=1", "--tmax", "1", "--samples", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    assert_eq!(text.lines().next(), Some("t,x,y,z,h1,h2,h3,u1,u2,u3,J"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 11);
    let last = rows.last().unwrap();
    assert!((last[0] - 1.0).abs() < 1e-15);
    assert!((last[1] - 1f64.sinh()).abs() < 1e-12);
    assert!(rows.iter().all(|r| r[10] == 0.0));
}

#[test]
fn p1_normal_at_rest_is_vertical() {
    let out = hlor(&["extremal", "--problem", "1", "--case", "normal", "--params", "theta0=0,a=0", "--tmax", "5", "--samples", "6"]);
    assert_eq!(out.status.code(), Some(0));
    for r in rows(&stdout(&out)) {
        assert_eq!((r[1], r[2]), (0.0, 0.0));
        assert!((r[3] - r[0]).abs() < 1e-14);
        assert!((r[10] - r[0]).abs() < 1e-14);
    }
}

#[test]
fn bad_arguments_exit_two() {
    for args in [
        vec!["extremal", "--problem", "1", "--case", "normal", "--params", "theta0=0", "--tmax", "5"],
        vec!["extremal", "--problem", "1", "--case", "normal", "--params", "theta0=0,a=x", "--tmax", "5"],
        vec!["extremal", "--problem", "2", "--case", "abnormal", "--params", "h2_0=0,h3=1,q=2", "--tmax", "1"],
        vec!["reach", "--problem", "2", "--point", "1,2"],
        vec!["reach", "--problem", "2", "--point", "1,0,0", "--plan"],
        vec!["reach", "--problem", "1", "--point", "1,0,0", "--loop-length", "3"],
        vec![],
    ] {
        let out = hlor(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn extremal_json_report() {
    let r = json(&["extremal", "--problem", "2", "--case", "normal", "--params", "h2_0=0.4,h3=0.9", "--tmax", "2.5", "--samples", "5", "--format", "json"]);
    assert_eq!(r["command"], "extremal");
    assert_eq!(r["outputs"]["trajectory"]["samples"].as_array().unwrap().len(), 5);
    let ids: Vec<&str> = r["ledger_entries"].as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"p2-normal-h2-rate"));
}

#[test]
fn verify_reports_budget() {
    let fine = json(&["verify", "--problem", "2", "--case", "normal", "--sweeps", "5", "--seed", "7"]);
    assert_eq!(fine["outputs"]["within_budget"], true);
    assert_eq!(fine["outputs"]["draws"].as_array().unwrap().len(), 5);
    let coarse = json(&["verify", "--problem", "1", "--case", "normal", "--sweeps", "5", "--step", "0.1", "--seed", "7"]);
    assert_eq!(coarse["outputs"]["within_budget"], false);
    assert_eq!(coarse["max_deviation"], coarse["outputs"]["worst_deviation"]);
}

#[test]
fn reach_verdicts() {
    let v = |p: &str| json(&["reach", "--problem", "2", "--point", p])["outputs"]["verdict"].clone();
    assert_eq!(v("1,0,0"), "Interior");
    assert_eq!(v("0,0,1"), "Outside");
    assert_eq!(v("1.1752011936438014,0.5430806348152437,1.0876005968219007"), "Boundary");
    assert_eq!(v("-1,0,0"), "Outside");
    assert_eq!(v("1,2,0"), "Outside");
    let plan = json(&["reach", "--problem", "1", "--point", "0,0,-1", "--plan", "--loop-length", "4"]);
    assert!(plan["outputs"]["endpoint_error"].as_f64().unwrap() <= 1e-6);
    assert!(plan["outputs"]["length"].as_f64().unwrap() >= 4.0);
}

#[test]
fn distance_values() {
    let d = json(&["distance", "--problem", "2", "--point", "2,0,0"]);
    assert_eq!(d["outputs"]["verdict"], "finite");
    assert!((d["outputs"]["distance"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    let inf = json(&["distance", "--problem", "1", "--point", "1,1,1"]);
    assert_eq!(inf["outputs"]["verdict"], "+infinity");
    assert!(inf["outputs"]["distance"].is_null());
}

#[test]
fn distance_recovers_duration() {
    let q = ExtremalParams::p2_normal_from(0.4, 0.9).eval(2.5).unwrap().q;
    let point = format!("{},{},{}", q.x, q.y, q.z);
    let d = json(&["distance", "--problem", "2", "--point", &point, "--verbose"]);
    assert!((d["outputs"]["distance"].as_f64().unwrap() - 2.5).abs() < 1e-6);
}

#[test]
fn ledger_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("hlor-ledger-{}.json", std::process::id()));
    let out = hlor(&["--ledger", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, heisenberg_lorentz::ledger::to_json());
}

#[test]
fn out_flag_matches_stdout() {
    let path = std::env::temp_dir().join(format!("hlor-out-{}.csv", std::process::id()));
    let args = ["extremal", "--problem", "1", "--case", "abnormal", "--params", "theta0=1", "--tmax", "2", "--samples", "4"];
    let direct = stdout(&hlor(&args));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = hlor(&with_out);
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, direct);
}
