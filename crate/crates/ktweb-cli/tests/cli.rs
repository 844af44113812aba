//! End-to-end tests against the built binary: exit codes, report fields,
//! CSV schema, and byte-stable output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn ktweb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ktweb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_yatsun_components() {
    let out = ktweb(&["classify", fixture("yatsun.json").to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["web_type"], "elliptic-hyperbolic");
    assert_eq!(v["invariants"]["delta1"], "1");
    assert_eq!(v["invariants"]["delta2"], "1/2");
    assert_eq!(v["invariants"]["delta3"], "1");
    assert_eq!(v["orbit_dimension"], 3);
    assert_eq!(v["frame"]["p1"], "-1/2");
    assert_eq!(v["frame"]["p2"], "0");
    assert_eq!(v["frame"]["p3"], "0");
    assert_eq!(v["k"], 1.0);
    assert_eq!(v["ell1"], "1");
    assert_eq!(v["ell2"], "-1/4");
    let beta: Vec<&str> = v["beta_canonical"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b.as_str().unwrap())
        .collect();
    assert_eq!(beta, ["3/4", "-1/4", "0", "0", "0", "1"]);
    assert_eq!(
        v["separable_map"],
        "q1 = 1/2 + cosh(u)*cos(v); q2 = sinh(u)*sin(v)"
    );
    assert_eq!(v["checks"]["killing_ok"], true);
    assert_eq!(v["checks"]["bde_ok"], true);
    assert_eq!(v["checks"]["bracket_ok"], true);
}

#[test]
fn classify_beta_form_matches_component_form() {
    let a = ktweb(&["classify", fixture("yatsun_beta.json").to_str().unwrap()]);
    assert!(a.status.success());
    let v = stdout_json(&a);
    assert_eq!(v["web_type"], "elliptic-hyperbolic");
    assert_eq!(v["frame"]["p1"], "-1/2");
    // beta form has no V, so only the killing check appears
    assert_eq!(v["checks"]["killing_ok"], true);
    assert!(v["checks"].get("bde_ok").is_none());
}

#[test]
fn classify_output_is_byte_stable() {
    let a = ktweb(&["classify", fixture("yatsun.json").to_str().unwrap()]);
    let b = ktweb(&["classify", fixture("yatsun.json").to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    // keys arrive sorted
    let text = String::from_utf8(a.stdout).unwrap();
    let first = text.find("\"beta_canonical\"").unwrap();
    let second = text.find("\"checks\"").unwrap();
    let third = text.find("\"web_type\"").unwrap();
    assert!(first < second && second < third);
}

#[test]
fn exit_codes() {
    let trivial = ktweb(&["classify", fixture("trivial.json").to_str().unwrap()]);
    assert_eq!(trivial.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&trivial.stderr).contains("trivial (multiple of the metric)"));

    let bad = ktweb(&["classify", fixture("not_killing.json").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("not a Killing tensor"));

    let malformed = ktweb(&["classify", fixture("malformed.json").to_str().unwrap()]);
    assert_eq!(malformed.status.code(), Some(1));

    let missing = ktweb(&["classify", "/nonexistent/file.json"]);
    assert_eq!(missing.status.code(), Some(1));

    let incompatible = ktweb(&["check", fixture("incompatible.json").to_str().unwrap()]);
    assert_eq!(incompatible.status.code(), Some(4));
}

#[test]
fn check_yatsun_short_horizon() {
    let out = ktweb(&[
        "check",
        fixture("yatsun.json").to_str().unwrap(),
        "--T",
        "1",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["bde_residual_zero"], true);
    assert_eq!(v["compatible"], true);
    assert_eq!(v["bracket_zero"], true);
    assert_eq!(v["numeric_drift"]["diverged"], false);
    assert!(v["numeric_drift"]["max_dF"].as_f64().unwrap() < 1e-5);
    let u = v["U_reconstructed"].as_str().unwrap();
    assert!(u.contains("q2^4"));
}

#[test]
fn check_default_horizon_reports_divergence() {
    // the Yatsun trajectory from the fixed phase point escapes before T = 10;
    // divergence is reported as data, not an error
    let out = ktweb(&["check", fixture("yatsun.json").to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["compatible"], true);
    assert_eq!(v["numeric_drift"]["diverged"], true);
    assert_eq!(v["numeric_drift"]["max_dF"], serde_json::Value::Null);
}

#[test]
fn check_incompatible_renders_residual() {
    let out = ktweb(&["check", fixture("incompatible.json").to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["compatible"], false);
    assert_eq!(v["bde_residual_zero"], false);
    assert_eq!(v["residual"], "-1");
    assert_eq!(v["U_reconstructed"], serde_json::Value::Null);
}

#[test]
fn check_zero_potential_is_trivially_compatible() {
    let dir = std::env::temp_dir().join("ktweb-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("zero_v.json");
    std::fs::write(
        &path,
        r#"{"beta": ["3/4","0","0","0","-1/2","1"], "V": "0"}"#,
    )
    .unwrap();
    let out = ktweb(&["check", path.to_str().unwrap(), "--T", "1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["compatible"], true);
    assert_eq!(v["U_reconstructed"], "0");
    assert_eq!(v["bracket_zero"], true);
}

#[test]
fn web_points_csv_schema() {
    let out = ktweb(&[
        "web-points",
        fixture("yatsun_beta.json").to_str().unwrap(),
        "--curves",
        "3",
        "--samples",
        "10",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,curve_index,u,v,q1,q2"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 3 * 10);
    assert!(rows
        .iter()
        .all(|r| r.starts_with("u,") || r.starts_with("v,")));

    // fixed-u rows of the Yatsun web satisfy the shifted ellipse equation
    for row in rows.iter().filter(|r| r.starts_with("u,")) {
        let cols: Vec<f64> = row.split(',').skip(2).map(|c| c.parse().unwrap()).collect();
        let (u, q1, q2) = (cols[0], cols[2], cols[3]);
        let lhs = ((q1 - 0.5) / u.cosh()).powi(2) + (q2 / u.sinh()).powi(2);
        assert!((lhs - 1.0).abs() < 1e-12);
    }
}

#[test]
fn web_points_trivial_is_rejected() {
    let out = ktweb(&["web-points", fixture("trivial.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_format_flag() {
    let out = ktweb(&[
        "classify",
        fixture("yatsun.json").to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("beta_canonical.0,\"3/4\""));
    assert!(text.contains("web_type,\"elliptic-hyperbolic\""));
}

#[test]
fn both_input_forms_rejected() {
    let dir = std::env::temp_dir().join("ktweb-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("both.json");
    std::fs::write(
        &path,
        r#"{"beta": ["1","0","0","0","0","0"], "K11": "1", "K12": "0", "K22": "0"}"#,
    )
    .unwrap();
    let out = ktweb(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn polar_fixture_classifies() {
    let out = ktweb(&["classify", fixture("polar.json").to_str().unwrap()]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["web_type"], "polar");
    assert_eq!(v["orbit_dimension"], 2);
    assert!(v.get("k").is_none());
    assert_eq!(v["separable_map"], "q1 = u*cos(v); q2 = u*sin(v)");
}
