use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_miranda-layers");

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("MIRANDA_LAYERS_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

#[test]
fn laplace_circle_config_passes_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cfg = config("laplace_circle.json");
    let o = run(&["identities", "--config", cfg.to_str().unwrap(), "--out", out], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["experiments"][0]["name"], "laplace_circle");
    assert!(dir.path().join("laplace_circle.csv").is_file());
    assert!(dir.path().join("criteria.csv").is_file());
    assert!(dir.path().join("timing.json").is_file());
}

#[test]
fn missing_config_exits_with_2() {
    let o = run(&["identities", "--config", "/nonexistent/suite.json"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read"));
}

#[test]
fn schema_error_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"version": 1, "experiments": [{"name": "x", "spec": {"kind": "gauss", "n": 15}}]}"#).unwrap();
    let o = run(&["kernels", "--config", path.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    let path2 = dir.path().join("unknown.json");
    std::fs::write(&path2, r#"{"version": 1, "experiments": [], "colour": 3}"#).unwrap();
    let o = run(&["all", "--config", path2.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_with_2() {
    let o = run(&["everything"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_thread_cap_exits_with_2() {
    let o = run(&["kernels"], &[("MIRANDA_LAYERS_THREADS", "many")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_tolerance_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strict.json");
    std::fs::write(
        &path,
        r#"{"version": 1, "experiments": [{"name": "strict", "spec": {"kind": "remark21", "trials": 5}},
            {"name": "tight", "spec": {"kind": "log_potential", "n": 32, "tolerance": 1e-30, "near_tolerance": 1e-30}}]}"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = run(&["all", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL tight/"));
}

#[test]
fn sequential_and_parallel_reports_match() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("laplace_circle.json");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let o = run(&["identities", "--config", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(
        &["identities", "--config", cfg.to_str().unwrap(), "--out", b.to_str().unwrap(), "--sequential"],
        &[("MIRANDA_LAYERS_THREADS", "2")],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(a.join("report.json")).unwrap(), std::fs::read(b.join("report.json")).unwrap());
}
