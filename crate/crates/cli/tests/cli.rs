use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn azumaya(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_azumaya"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn arrangement_report_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "diag.json",
        r#"{"data": {"n": 2, "B": [[1,1]], "alpha": [1], "p": 3, "lambda": [1]}}"#,
    );
    let out = azumaya(&["arrangement-report", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "azumaya-report/1");
    let d = &v["checks"][0]["details"];
    assert_eq!(d["simple"], true);
    assert_eq!(d["smooth"], true);
    assert_eq!(d["N"], 2);
}

#[test]
fn point_azumaya_full_rank() {
    let out = azumaya(&["point-azumaya", "--p", "5", "--n", "2", "--random", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let certs: Vec<&Value> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["theorem"] == "azumaya_point")
        .collect();
    assert_eq!(certs.len(), 3);
    for c in certs {
        assert_eq!(c["pass"], true);
        assert_eq!(c["details"]["ranks"]["action_map"], 625);
        assert_eq!(c["details"]["dims"]["d_eta"], 25);
    }
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, jobs) in [(&a, "1"), (&b, "4")] {
        let out = azumaya(&[
            "weyl-verify", "--p", "2,3", "--n", "1,2", "--random", "2", "--seed", "11", "--jobs", jobs,
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn different_seed_different_points() {
    let run = |seed: &str| azumaya(&["cover-fiber", "--p", "3", "--n", "2", "--random", "2", "--seed", seed]).stdout;
    assert_ne!(run("1"), run("2"));
}

#[test]
fn malformed_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"p": "seven"}"#);
    assert_eq!(azumaya(&["suite", "--config", &cfg]).status.code(), Some(2));
    let cfg = write_config(dir.path(), "unknown.json", r#"{"primes": [3]}"#);
    assert_eq!(azumaya(&["suite", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(azumaya(&["weyl-verify", "--p", "4"]).status.code(), Some(2));
    assert_eq!(azumaya(&["weyl-verify", "--p", "11"]).status.code(), Some(2));
    assert_eq!(azumaya(&["weyl-verify", "--n", "0"]).status.code(), Some(2));
    assert_eq!(azumaya(&["freeness-check"]).status.code(), Some(2));
    assert_eq!(azumaya(&["suite", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
}

#[test]
fn non_primitive_data_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "np.json",
        r#"{"data": {"n": 2, "B": [[2,0]], "alpha": [1], "p": 3, "lambda": [0]}}"#,
    );
    assert_eq!(azumaya(&["arrangement-report", "--config", &cfg]).status.code(), Some(2));
}

#[test]
fn hypertoric_default_is_checked() {
    let out = azumaya(&["hypertoric-azumaya", "--p", "3", "--n", "2", "--random", "2", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["details"]["closed_orbit_mode"], "1ps-checked");
        assert_eq!(c["details"]["rank"], c["details"]["expected_rank"]);
    }
    let out = azumaya(&[
        "hypertoric-azumaya", "--p", "3", "--n", "2", "--random", "1", "--assert-closed-orbit",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"][0]["details"]["closed_orbit_mode"], "asserted");
}

#[test]
fn summary_counts_match_checks() {
    let out = azumaya(&["suite", "--p", "2", "--n", "1", "--random", "1", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let n = v["checks"].as_array().unwrap().len() as u64;
    assert_eq!(v["summary"]["checks"], n);
    assert_eq!(v["summary"]["passed"], n);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["generator"], "splitmix64");
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("all checks passed"));
}
