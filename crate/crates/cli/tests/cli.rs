use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spinmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinmod")).args(args).env_remove("SPINMOD_BUDGET").output().unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn enumerate_spin_poset() {
    let out = spinmod(&["enumerate", "--g", "1", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["nodes"].as_array().unwrap().len(), 5);
    assert!(stderr(&out).contains("components: 2"));

    let out = spinmod(&["enumerate", "--g", "0", "--n", "3", "--kind", "spin"]);
    assert_eq!(json(&out)["nodes"].as_array().unwrap().len(), 1);
}

#[test]
fn enumerate_graphs_in_each_format() {
    let out = spinmod(&["enumerate", "--g", "2", "--kind", "graphs"]);
    assert_eq!(json(&out)["nodes"].as_array().unwrap().len(), 7);

    let csv = spinmod(&["enumerate", "--g", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&csv.stdout).lines().count(), 30);
    let dot = spinmod(&["enumerate", "--g", "2", "--format", "dot"]);
    assert!(String::from_utf8_lossy(&dot.stdout).starts_with("digraph"));
}

#[test]
fn output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = spinmod(&["enumerate", "--g", "1", "--n", "1", "--format", "csv", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("spin_g1_n1.csv").exists());
    assert!(out.stdout.is_empty());
}

#[test]
fn verify_passes_and_reports() {
    let out = spinmod(&["verify", "--g", "2", "--n", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert!(stderr(&out).contains("PASS counts/theta_characteristics"));

    let fuzzed = spinmod(&["verify", "--g", "1", "--n", "2", "--suite", "functoriality", "--fuzz", "20", "--seed", "7"]);
    assert_eq!(fuzzed.status.code(), Some(0));
    assert!(stderr(&fuzzed).contains("fuzz seed: 7"));
}

#[test]
fn exit_codes() {
    // unknown suite, empty moduli space, unknown format
    assert_eq!(spinmod(&["verify", "--g", "1", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(spinmod(&["verify", "--g", "1", "--n", "0"]).status.code(), Some(2));
    assert_eq!(spinmod(&["enumerate", "--g", "1", "--n", "1", "--format", "xml"]).status.code(), Some(2));
    // budget
    assert_eq!(spinmod(&["enumerate", "--g", "3", "--budget-edges", "5"]).status.code(), Some(3));
    let env = Command::new(env!("CARGO_BIN_EXE_spinmod"))
        .args(["enumerate", "--g", "3"])
        .env("SPINMOD_BUDGET", "edges=4")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_spinmod"))
        .args(["enumerate", "--g", "2", "--budget-edges", "3"])
        .env("SPINMOD_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));
}

#[test]
fn trop_theta_family() {
    let out = spinmod(&["trop", &fixture("theta_family.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["commutes"], true);
    let nums: Vec<i64> = v["stable_model"].as_array().unwrap().iter().map(|l| l["num"].as_i64().unwrap()).collect();
    assert_eq!(nums, [1, 2, 6]);
}

#[test]
fn trop_infinite_and_mixed() {
    let out = spinmod(&["trop", &fixture("theta_family_infinite.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["stable_model"].as_array().unwrap().iter().all(|l| l == "inf"));
    assert_eq!(v["generic_fiber"]["graph"]["edges"].as_array().unwrap().len(), 3);

    let out = spinmod(&["trop", &fixture("theta_family_mixed.json")]);
    assert_eq!(out.status.code(), Some(0));
    let generic = &json(&out)["generic_fiber"];
    assert_eq!(generic["graph"]["vertices"][0]["weight"], 1);
    assert_eq!(generic["graph"]["edges"].as_array().unwrap().len(), 1);
}

#[test]
fn fiber_over_theta() {
    let out = spinmod(&["fiber", &fixture("theta_curve.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 7);
}

#[test]
fn malformed_input() {
    let out = spinmod(&["trop", &fixture("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("malformed.json"));
    assert_eq!(spinmod(&["fiber", "/nonexistent/curve.json"]).status.code(), Some(2));
}

#[test]
fn list_names_registered_strategies() {
    let out = String::from_utf8(spinmod(&["list"]).stdout).unwrap();
    for name in ["counts", "posets", "functoriality", "refine", "tropical", "all", "json", "dot", "csv"] {
        assert!(out.contains(name), "{name}");
    }
}
