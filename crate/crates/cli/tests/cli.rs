use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

const M3: &str = r#"{"kind":"lattice","elements":["0","a","b","c","1"],
  "leq":[["0","a"],["0","b"],["0","c"],["a","1"],["b","1"],["c","1"]]}"#;
const CHAIN3: &str = r#"{"kind":"lattice","elements":["0","1","2"],"leq":[["0","1"],["1","2"]]}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_latwb")).args(args).arg("--format").arg("json").output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn m3_is_refuted_and_the_witness_checks_out() {
    let dir = TempDir::new().unwrap();
    let m3 = write(&dir, "m3.json", M3);
    let report = dir.path().join("r.json");
    let (code, v) = run(&["check", "distributive", path(&m3)]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "refuted");
    assert_eq!(v["witnesses"][0]["kind"], "distributivity");

    let out = Command::new(env!("CARGO_BIN_EXE_latwb"))
        .args(["check", "distributive", path(&m3), "--format", "json", "--out", path(&report)])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let (code, v) = run(&["verify", "witness", path(&report)]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["verdict"], "verified");
}

#[test]
fn forged_witness_is_rejected() {
    let dir = TempDir::new().unwrap();
    let w = write(
        &dir,
        "w.json",
        &format!(r#"{{"kind":"distributivity","lattice":{CHAIN3},"elements":["0","1","2"]}}"#),
    );
    let (code, v) = run(&["verify", "witness", path(&w)]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "error");
}

#[test]
fn con_of_three_chain() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "chain3.json", CHAIN3);
    let (code, v) = run(&["con", path(&c)]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["count"], 4);
    // Boolean 2^2: one congruence per subset of the two covers collapsed.
    let mut added: Vec<usize> =
        v["details"]["congruences"].as_array().unwrap().iter().map(|c| c["added"].as_array().unwrap().len()).collect();
    added.sort();
    assert_eq!(added, vec![0, 1, 1, 3]);
}

#[test]
fn cube_to_seven_verifies() {
    let (code, v) = run(&["verify", "cube", "--max-size", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["liftings"], 0);
    assert_eq!(v["details"]["lattice_counts"], serde_json::json!([1, 1, 1, 2, 5, 15, 53]));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let (code, v) = run(&["suite", "bogus"]);
    assert_eq!((code, v["verdict"].as_str()), (2, Some("error")));

    let bad = write(&dir, "bad.json", r#"{"kind":"lattice","elements":["0","1"],"leq":[["0","2"]]}"#);
    assert_eq!(run(&["validate", path(&bad)]).0, 2);

    let (code, v) = run(&["verify", "cube", "--max-size", "20"]);
    assert_eq!(code, 3);
    assert_eq!(v["details"]["class"], "resource");
}

#[test]
fn reports_are_reproducible_up_to_timing() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let a = strip(run(&["suite", "measure-axioms", "--scale", "small", "--seed", "7"]).1);
    let b = strip(run(&["suite", "measure-axioms", "--scale", "small", "--seed", "7"]).1);
    assert_eq!(a, b);
    assert_eq!(a["seed"], 7);
    let c = strip(run(&["suite", "measure-axioms", "--scale", "small", "--seed", "8"]).1);
    assert_ne!(a["inputs_digest"], c["inputs_digest"]);
}

#[test]
fn free_lattice_words() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "anti.json",
        r#"{"kind":"poset","elements":["x","y"],"leq":[]}"#,
    );
    let (code, v) = run(&["free", "leq", path(&p), "(meet x y)", "(join x y)"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["details"]["leq"], true);
    let (_, v) = run(&["free", "eq", path(&p), "x", "(join x (meet x y))"]);
    assert_eq!(v["details"]["eq"], true);
    let (_, v) = run(&["free", "enum", path(&p), "--depth", "3"]);
    assert_eq!(v["details"]["count"], 4);
    assert_eq!(v["details"]["complete"], true);
}

#[test]
fn quotient_and_theta_agree() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "chain3.json", CHAIN3);
    let (_, q) = run(&["quotient", path(&c), "--pairs", "2<=1"]);
    let (_, t) = run(&["theta", path(&c), "2", "1"]);
    assert_eq!(q["details"]["congruence"], t["details"]);
    assert_eq!(q["details"]["quotient"]["elements"].as_array().unwrap().len(), 2);
}
