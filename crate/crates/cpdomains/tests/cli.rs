//! End-to-end tests of the `cpdomains` binary: exit codes, JSON output
//! shape, and byte-level determinism.

use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cpdomains"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should launch")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout should be JSON")
}

#[test]
fn analyze_fixture_agrees_and_exits_zero() {
    let out = run(&["analyze", "--fixture", "EX-A"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["agreement"], Value::Bool(true));
    assert_eq!(v["mult_definitional"]["dimension"], 2);
    assert_eq!(v["ternary_definitional"]["dimension"], 1);
    assert_eq!(v["structure"]["all_pass"], Value::Bool(true));
}

#[test]
fn analyze_zero_map_skips_dilation_route() {
    let out = run(&["analyze", "--fixture", "EX-0:2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v.get("mult_stinespring").is_none());
    assert_eq!(v["mult_definitional"]["dimension"], 4);
}

#[test]
fn module_domain_four_way_agreement() {
    let out = run(&["module-domain", "--fixture", "EX-A", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["agreement"], Value::Bool(true));
    assert_eq!(v["definitional"]["dimension"], v["ideal"]["dimension"]);
    assert!(v["realization"]["k"].as_u64().unwrap() >= 1);
}

#[test]
fn module_domain_without_p_is_an_input_error() {
    let out = run(&["module-domain", "--fixture", "EX-A"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dilate_reports_minimal_dilation() {
    let out = run(&["dilate", "--fixture", "EX-ID:2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["r"], 1);
    assert_eq!(v["minimality_dimension"], 2);
    assert!(v["reconstruction_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn dilate_zero_map_is_an_input_error() {
    let out = run(&["dilate", "--fixture", "EX-0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn linking_fixture_block_dimensions() {
    let out = run(&["linking", "--fixture", "EX-A", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["m_tilde"]["dim_M_tilde"], 10);
    assert_eq!(v["t_tilde"]["dim_T_tilde"], 9);
    assert_eq!(v["m_tilde"]["equal"], Value::Bool(true));
    assert_eq!(v["purity"]["all_pass"], Value::Bool(true));
}

#[test]
fn unknown_fixture_is_an_input_error() {
    let out = run(&["analyze", "--fixture", "EX-NOPE"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_cp_choi_is_an_input_error() {
    let dir = std::env::temp_dir().join("cpdomains-cli-noncp");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("noncp.json");
    std::fs::write(
        &path,
        r#"{"cp_map": {"n": 1, "h": 2, "choi": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]}}"#,
    )
    .unwrap();
    let out = run(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not completely positive"));
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = std::env::temp_dir().join("cpdomains-cli-badjson");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = run(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_flag_writes_the_report_file() {
    let dir = std::env::temp_dir().join("cpdomains-cli-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = run(&[
        "analyze",
        "--fixture",
        "EX-B",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["agreement"], Value::Bool(true));
}

#[test]
fn verify_small_run_is_byte_deterministic() {
    let args = ["verify", "--trials", "3", "--seed", "42"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["seed"], 42);
}

#[test]
fn tolerance_flags_show_up_in_the_report() {
    let out = run(&["analyze", "--fixture", "EX-A", "--tol-residual", "1e-7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["tolerances"]["residual_atol"], 1e-7);
}
