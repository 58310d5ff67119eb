// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::{Command, Output};

fn qsg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsg"))
        .args(args)
        .env("QSG_THREADS", "2")
        .output()
        .expect("qsg runs")
}

fn write_config(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn scenario_file(name: &str) -> String {
    format!("{}/../../scenarios/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn list_is_alphabetical_and_stable() {
    let a = qsg(&["list"]);
    let b = qsg(&["list"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let names: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(text.contains("scaled-linear-a"));
    assert!(text.contains("constant-jordan"));
}

#[test]
fn constant_diagonal_exits_zero_with_json() {
    let out = qsg(&["run", "--config", &scenario_file("constant-diagonal.toml")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["summary"]["FAIL"], 0);
    assert!(v["summary"]["PASS"].as_u64().unwrap() > 0);
    assert!(v["tool_version"].as_str().unwrap().starts_with("qsg "));
    assert!(v.get("wall_time_ms").is_none());
}

#[test]
fn witness_is_report_only_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let cfg = scenario_file("scaled-linear-a.toml");
    for p in [&a, &b] {
        let out = qsg(&["run", "--config", &cfg, "--out", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    let witness = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["claim_id"] == "thm2.1.1" && r["params"]["t"] == 0.0 && r["params"]["s"] == 1.0)
        .expect("witness record");
    assert_eq!(witness["verdict"], "REPORT-ONLY");
    let residual = witness["residual"].as_f64().unwrap();
    assert!((residual - 1.34).abs() < 0.01, "{residual}");
}

#[test]
fn table_format_and_timing() {
    let out = qsg(&["run", "--config", &scenario_file("jordan-pseudospectrum.toml"), "--format", "table"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.contains("thm2.4.4") && l.contains("vacuous in finite dimension")));

    let out = qsg(&["run", "--config", &scenario_file("constant-jordan.toml"), "--timing"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["wall_time_ms"].is_u64());
}

#[test]
fn coarse_evolution_step_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        &dir,
        "coarse.toml",
        "scenario_id = \"coarse\"\nclaims = [\"def1.1.2\"]\n[backend]\nkind = \"evolution\"\ngenerator = \"airy\"\nstep = 0.7\n",
    );
    let out = qsg(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["summary"]["FAIL"].as_u64().unwrap() > 0);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown_key = write_config(
        &dir,
        "bad.toml",
        "scenario_id = \"x\"\n[backend]\ncatalog = \"constant-diagonal\"\ncolour = \"red\"\n",
    );
    let out = qsg(&["run", "--config", unknown_key.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("backend.colour"));

    let unknown_catalog = write_config(&dir, "cat.toml", "scenario_id = \"x\"\n[backend]\ncatalog = \"nope\"\n");
    let out = qsg(&["run", "--config", unknown_catalog.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));

    let negative = write_config(
        &dir,
        "neg.toml",
        "scenario_id = \"x\"\n[backend]\ncatalog = \"constant-diagonal\"\n[grid]\nt = [-1.0]\n",
    );
    let out = qsg(&["run", "--config", negative.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.t"));

    let missing = dir.path().join("missing.toml");
    let out = qsg(&["run", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_qsg"))
        .args(["run", "--config", &scenario_file("constant-diagonal.toml")])
        .env("QSG_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn selftest_passes() {
    let out = qsg(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS expm_vs_diagonalization"));
    assert!(!text.contains("FAIL"));
}
