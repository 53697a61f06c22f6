//! Binary-level checks: exit codes, JSON shape, and byte determinism of the
//! `ncsym` executable.

use std::process::{Command, Output};

fn ncsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncsym"))
        .args(args)
        .env_remove("NCSYM_SEED")
        .output()
        .expect("binary should run")
}

#[test]
fn express_infeasible_exits_3() {
    let out = ncsym(&[
        "express",
        "--target",
        "z*w*z + w*z*w",
        "--generators",
        "z+w",
        "--generators",
        "z*w+w*z",
        "--degree-bound",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["expressible"], serde_json::json!(false));
    assert!(body["residual"].as_f64().unwrap() > 0.1);
}

#[test]
fn express_feasible_exits_0() {
    let out = ncsym(&[
        "express",
        "--target",
        "z*w + w*z",
        "--generators",
        "z+w",
        "--generators",
        "z*w+w*z",
        "--degree-bound",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["expressible"], serde_json::json!(true));
}

#[test]
fn express_parse_error_exits_2() {
    let out = ncsym(&[
        "express",
        "--target",
        "z**w",
        "--generators",
        "z+w",
        "--degree-bound",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["error"], serde_json::json!("parse"));
    assert_eq!(body["col"], serde_json::json!(3));
}

#[test]
fn unknown_flag_exits_2() {
    let out = ncsym(&["express", "--nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pipeline_runs_and_is_byte_deterministic() {
    let args = ["pipeline", "--seed", "7", "--levels", "1,2", "--k-half-dim", "1"];
    let a = ncsym(&args);
    let b = ncsym(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout, "same seed must reproduce the report bytes");
    let body: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(body["report"]["stages"].is_array());
    assert!(body["report"]["U"]["data"].is_array());
    assert!(body["report"]["verify"]["holdout"].is_number());
}

#[test]
fn pipeline_tolerance_override_exits_4() {
    let out = ncsym(&[
        "pipeline",
        "--seed",
        "7",
        "--levels",
        "1,2",
        "--k-half-dim",
        "1",
        "--tol.averaged",
        "1e-18",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["failed_stage"], serde_json::json!("averaged"));
}

#[test]
fn seed_env_fallback() {
    let with_flag = ncsym(&["pipeline", "--seed", "11", "--levels", "1", "--k-half-dim", "1"]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_ncsym"))
        .args(["pipeline", "--levels", "1", "--k-half-dim", "1"])
        .env("NCSYM_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(with_flag.stdout, with_env.stdout);
}

#[test]
fn suite_selection_and_empty_error() {
    let out = ncsym(&["suite", "--seed", "1", "--checks", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["all_passed"], serde_json::json!(true));

    // An out-of-range id is a usage error.
    let out = ncsym(&["suite", "--checks", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn suite_writes_out_file() {
    let dir = std::env::temp_dir().join("ncsym-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("suite.json");
    let out = ncsym(&["suite", "--checks", "1,5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let file = std::fs::read(&path).unwrap();
    // The file holds the same bytes as stdout (minus the trailing newline).
    assert_eq!(file.as_slice(), &out.stdout[..out.stdout.len() - 1]);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn suite_sweep_table() {
    let out = ncsym(&["suite", "--seed", "3", "--checks", "1", "--sweep", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let sweep = body["sweep"].as_array().unwrap();
    assert_eq!(sweep.len(), 2);
    assert!(sweep[0]["holdout"].is_number());
    assert!(sweep[0]["pass"].as_bool().unwrap());
}
