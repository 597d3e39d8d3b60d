//! End-to-end runs of the `soergel` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn soergel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soergel")).args(args).env_remove("SOERGEL_SYSTEM_PATH").output().expect("binary runs")
}

fn certificate(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("soergel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn euler_of_an_inverse_pair_is_one() {
    let out = soergel(&["euler", "--braid", "s s-"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = certificate(&out);
    assert_eq!(cert["command"], "euler");
    assert_eq!(cert["verdict"], "1");
    assert!(cert["checks"].as_object().unwrap().values().all(|v| v == true));
}

#[test]
fn relations_pass_on_presets() {
    for system in ["A2", "A1xA1"] {
        let out = soergel(&["--system", system, "relations"]);
        assert_eq!(out.status.code(), Some(0), "{system}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn d2check_and_complex() {
    let out = soergel(&["d2check", "--braid", "s s t-"]);
    assert_eq!(out.status.code(), Some(0));
    let out = soergel(&["complex", "--braid", "s t-"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(certificate(&out)["inputs"]["braid"], "s t-");
}

#[test]
fn rouquier_formula_verdicts() {
    let out = soergel(&["rouquier-formula", "--w", "sts", "--v", "tst"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(certificate(&out)["verdict"], "R[0]");
    let out = soergel(&["rouquier-formula", "--w", "st", "--v", "ts"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(certificate(&out)["verdict"], "0");
}

#[test]
fn certificates_replay_and_tampering_is_detected() {
    let path = scratch("gamma.json");
    let out = soergel(&["gamma", "--pair", "s,t", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let replayed = soergel(&["replay", path.to_str().unwrap()]);
    assert_eq!(replayed.status.code(), Some(0), "{}", String::from_utf8_lossy(&replayed.stderr));

    let mut cert: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    cert["verdict"] = Value::from("tampered");
    let bad = scratch("gamma-tampered.json");
    std::fs::write(&bad, serde_json::to_string(&cert).unwrap()).unwrap();
    assert_eq!(soergel(&["replay", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn inverse_certificate() {
    let out = soergel(&["inverse", "--gen", "t"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_and_configuration_errors_exit_with_two() {
    assert_eq!(soergel(&["euler", "--braid", "x"]).status.code(), Some(2));
    assert_eq!(soergel(&["--system", "E8", "relations"]).status.code(), Some(2));
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"generators":["s","t"],"coxeter_matrix":[[1,3],[3,1]],"cartan":[[3,-1],[-1,2]]}"#).unwrap();
    assert_eq!(soergel(&["--system", bad.to_str().unwrap(), "relations"]).status.code(), Some(2));
    assert_eq!(soergel(&["rouquier-formula", "--w", "ss", "--v", "s"]).status.code(), Some(2));
}

#[test]
fn systems_are_found_on_the_search_path() {
    let dir = scratch("systems");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("mine.json"), r#"{"generators":["a","b"],"coxeter_matrix":[[1,2],[2,1]],"cartan":[[2,0],[0,2]]}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_soergel"))
        .args(["--system", "mine", "euler", "--braid", "a b"])
        .env("SOERGEL_SYSTEM_PATH", &dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
