use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn gogrow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gogrow"))
        .args(args)
        .env_remove("GOGROW_SEED")
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> Vec<u8> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn assert_golden(args: &[&str], name: &str) {
    let out = gogrow(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout == golden(name), "output of {args:?} differs from {name}");
}

#[test]
fn simulate_constant_golden() {
    assert_golden(
        &["simulate", "--rho", "1", "--phi", "const", "--value", "0.5", "--t-end", "2", "-n", "16"],
        "simulate_const.csv",
    );
}

#[test]
fn simulate_constant_column_is_constant() {
    let out = gogrow(&["simulate", "--rho", "1", "--phi", "const", "--value", "0.5", "--t-end", "10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,theta,w,I"));
    for line in lines {
        let x: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(x, 0.5);
    }
}

#[test]
fn simulate_cosine_golden() {
    assert_golden(&["simulate", "--rho", "50", "--t-end", "3", "-n", "64"], "simulate_cos.csv");
}

#[test]
fn chart_golden() {
    assert_golden(&["chart", "--j", "2", "--samples", "8"], "chart_j2.csv");
}

#[test]
fn abm_golden_and_seed_from_env() {
    let args = ["abm", "--side", "12", "--t-end", "2", "--record-dt", "0.25", "--seed", "11"];
    assert_golden(&args, "abm_side12.csv");
    let via_env = Command::new(env!("CARGO_BIN_EXE_gogrow"))
        .args(&args[..args.len() - 2])
        .env("GOGROW_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(via_env.stdout, golden("abm_side12.csv"));
}

#[test]
fn spectrum_golden() {
    assert_golden(
        &["spectrum", "--rho", "20", "--format", "json", "--rect=-1,1,0,10"],
        "spectrum_rho20.json",
    );
}

#[test]
fn meanfield_golden() {
    assert_golden(&["meanfield", "-n", "16", "--t-end", "2"], "meanfield.csv");
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["abm", "--side", "20", "--runs", "4", "--t-end", "2", "--threads", "2"];
    let a = gogrow(&args);
    let b = gogrow(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn missing_rho_is_usage_error() {
    assert_eq!(gogrow(&["simulate", "--t-end", "3"]).status.code(), Some(2));
}

#[test]
fn invalid_phi_is_usage_error() {
    assert_eq!(gogrow(&["simulate", "--rho", "1", "--phi", "const"]).status.code(), Some(2));
    assert_eq!(gogrow(&["simulate", "--rho", "1", "--phi", "sine"]).status.code(), Some(2));
    assert_eq!(gogrow(&["simulate", "--rho", "1", "--b", "-1"]).status.code(), Some(2));
}

#[test]
fn unknown_flag_is_usage_error() {
    assert_eq!(gogrow(&["chart", "--bogus", "1"]).status.code(), Some(2));
}

#[test]
fn invariance_violation_is_numerical_failure() {
    let out = gogrow(&["simulate", "--rho", "200", "-n", "16", "--t-end", "5"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("feasible range"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chart.csv");
    let out = gogrow(&["chart", "--j", "2", "--samples", "8", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), golden("chart_j2.csv"));
}

#[test]
fn heteroclinic_json_fields() {
    let out = gogrow(&["heteroclinic", "--format", "json", "--t-end", "50"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["rho", "c", "lambda0", "fitted_growth", "terminal_gap"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(gogrow(&["heteroclinic", "--c", "0.5"]).status.code() == Some(2));
}

#[test]
fn abm_config_file_and_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    fs::write(&good, "side = 10\nseeding = 1.0\n").unwrap();
    let out = gogrow(&["abm", "--config", good.to_str().unwrap(), "--t-end", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        assert_eq!(line.split(',').nth(3).unwrap().parse::<f64>().unwrap(), 1.0);
    }
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "sides = 10\n").unwrap();
    assert_eq!(gogrow(&["abm", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn gallery_writes_series_and_index() {
    let dir = tempfile::tempdir().unwrap();
    let out = gogrow(&["gallery", "--t-end", "20", "--window", "10,20", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let index: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("index.json")).unwrap()).unwrap();
    let entries = index["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    for e in entries {
        assert!(dir.path().join(e["file"].as_str().unwrap()).exists());
    }
}

#[test]
fn accept_single_criterion() {
    let out = gogrow(&["accept", "--only", "1"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("[PASS]"));
    assert_eq!(gogrow(&["accept", "--only", "13"]).status.code(), Some(2));
}
