use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn qll(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qll"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .expect("qll runs")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("run report on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn certify_chain3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cert.json");
    let o = qll(&["certify-ffunc"], &scenario("certify_chain3.json"), &out);
    assert_eq!(o.status.code(), Some(0));
    let rep = report(&o);
    assert_eq!(rep["verdict"], "pass");
    assert_eq!(rep["scenario_hash"].as_str().unwrap().len(), 64);
    let body: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(body["norm1"].as_f64(), Some(1.5));
    assert!((body["c_f"].as_f64().unwrap() - 41.0 / 16.0).abs() < 1e-11);
}

#[test]
fn single_site_norm_is_f0() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "one.json",
        r#"{"schema": 1, "lattice": {"kind": "chain", "n": 1},
            "ffunction": {"family": "power_law", "nu": 1, "eps": 1}}"#,
    );
    let out = dir.path().join("cert.json");
    let o = qll(&["certify-ffunc"], &cfg, &out);
    assert_eq!(o.status.code(), Some(0));
    let body: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(body["norm1"].as_f64(), Some(1.0));
}

#[test]
fn malformed_json_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"schema": 1, "lattice": "#);
    let o = qll(&["certify-ffunc"], &cfg, &dir.path().join("x.json"));
    assert_eq!(o.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
}

#[test]
fn unknown_fields_and_schema_versions_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let extra = write(
        dir.path(),
        "extra.json",
        r#"{"schema": 1, "lattice": {"kind": "chain", "n": 3}, "colour": "blue"}"#,
    );
    assert_eq!(qll(&["certify-ffunc"], &extra, &dir.path().join("x.json")).status.code(), Some(2));
    let v2 = write(dir.path(), "v2.json", r#"{"schema": 2, "lattice": {"kind": "chain", "n": 3}}"#);
    assert_eq!(qll(&["certify-ffunc"], &v2, &dir.path().join("x.json")).status.code(), Some(2));
    let missing = dir.path().join("nope.json");
    assert_eq!(qll(&["certify-ffunc"], &missing, &dir.path().join("x.json")).status.code(), Some(2));
}

#[test]
fn zero_interaction_passes_with_zero_commutators() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lr.json");
    let o = qll(&["lr-scan"], &scenario("lr_zero.json"), &out);
    assert_eq!(o.status.code(), Some(0));
    let body: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let lhs = body["lhs"].as_array().unwrap();
    assert_eq!(lhs.len(), 12);
    assert!(lhs.iter().flat_map(|r| r.as_array().unwrap()).all(|v| v.as_f64() == Some(0.0)));
}

#[test]
fn overlapping_supports_are_a_contract_violation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "overlap.json",
        r#"{"schema": 1, "lattice": {"kind": "chain", "n": 3},
            "ffunction": {"family": "power_law", "nu": 1, "eps": 1},
            "interaction": {"model": "tfim", "J": 1, "g": 1},
            "pairs": {"kind": "explicit", "pairs": [
                {"a": {"sites": [0, 1], "paulis": "ZZ"}, "b": {"sites": [1], "paulis": "X"}}]},
            "times": {"values": [0, 0.5]}}"#,
    );
    let o = qll(&["lr-scan"], &cfg, &dir.path().join("lr.json"));
    assert_eq!(o.status.code(), Some(1));
    let rep = report(&o);
    assert!(rep["message"].as_str().unwrap().contains("overlap"));
}

#[test]
fn unknown_site_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "site.json",
        r#"{"schema": 1, "lattice": {"kind": "chain", "n": 3},
            "ffunction": {"family": "power_law", "nu": 1, "eps": 1},
            "interaction": {"model": "tfim", "J": 1, "g": 1},
            "pairs": {"kind": "from_site", "site": 7, "pauli": "Z"},
            "times": {"values": [0, 0.5]}}"#,
    );
    assert_eq!(qll(&["lr-scan"], &cfg, &dir.path().join("lr.json")).status.code(), Some(2));
}

#[test]
fn gap_scan_through_the_critical_point_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gaps.csv");
    let o = qll(&["gap-scan"], &scenario("gap_scan_critical.json"), &out);
    assert_eq!(o.status.code(), Some(1));
    let rep = report(&o);
    assert_eq!(rep["verdict"], "fail");
    // the s = 0 end is deep in the ordered phase, where the gap is tiny
    for curve in rep["summary"].as_array().unwrap() {
        assert!(curve["min_gap"].as_f64().unwrap() < 0.5);
        assert!(curve["argmin_s"].as_f64().unwrap() < 0.5);
        let closings = curve["near_closings"].as_array().unwrap();
        assert!(closings.iter().any(|s| s.as_f64().is_some_and(|s| s > 0.0 && s < 1.0)));
    }
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("n,s,E0,E1,gap\n"));
    assert_eq!(csv.lines().count(), 1 + 3 * 41);
}

#[test]
fn constant_path_flow_keeps_the_ground_state() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "flat.json",
        r#"{"schema": 1, "lattice": {"kind": "chain", "n": 3},
            "path": {"start": {"model": "tfim", "J": 1, "g": 2},
                     "end": {"model": "tfim", "J": 1, "g": 2}},
            "flow": {"n": 3, "steps": 4}}"#,
    );
    let out = dir.path().join("flow.json");
    let o = qll(&["flow"], &cfg, &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let body: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((body["min_fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn continuity_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let csv = dir.path().join("c.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_qll"))
        .args(["continuity", "--jobs", "1", "--config"])
        .arg(scenario("continuity_tfim6.json"))
        .arg("--out")
        .arg(&out)
        .arg("--csv")
        .arg(&csv)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,lhs,rhs,holds"));
    assert_eq!(lines.filter(|l| l.ends_with(",1")).count(), 4);
}

#[test]
fn exponential_form_without_weight_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cone.json",
        r#"{"schema": 1, "lattice": {"kind": "chain", "n": 4},
            "ffunction": {"family": "power_law", "nu": 1, "eps": 1},
            "interaction": {"model": "tfim", "J": 1, "g": 1},
            "times": {"values": [0, 1]}}"#,
    );
    assert_eq!(qll(&["lightcone"], &cfg, &dir.path().join("x.json")).status.code(), Some(2));
}
