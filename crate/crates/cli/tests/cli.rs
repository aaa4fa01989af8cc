use std::process::{Command, Output};

use serde_json::Value;

fn ckq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ckq")).args(args).env_remove("CKQ_OUTPUT_DIR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn failing_ids(v: &Value) -> Vec<String> {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["id"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn bad_sigma_is_a_usage_error() {
    let o = ckq(&["derive", "--n", "3", "--sigma", "1,1,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a permutation"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(ckq(&["derive", "--bogus"]).status.code(), Some(2));
}

#[test]
fn undefined_contraction_is_an_engine_error() {
    let o = ckq(&["contract", "--n", "4", "--sigma", "sigmaIII", "--multiplier", "j0", "--j", "iota,1,1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("undefined contraction"));
}

#[test]
fn derive_text_lists_generators() {
    let o = ckq(&["derive", "--n", "3", "--sigma", "1,2,3", "--order", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("xi1, xi2, xi3"));
}

#[test]
fn contract_keeps_iota_fiber_commuting() {
    let o = ckq(&["contract", "--n", "4", "--sigma", "sigmaII", "--j", "1,iota,1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("xi3*xi4 = xi4*xi3"));
    assert!(out.contains("xi1*xi2 = xi2*xi1"));
}

#[test]
fn multiplier_latex_table() {
    let o = ckq(&["multiplier", "--n", "4", "--sigma", "sigmaIII", "--format", "latex"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("\\begin{tabular}"));
    assert!(out.contains("theorem & $j_{1}^{2}j_{2}^{2}j_{3}$"));
}

#[test]
fn sphere_json_parses() {
    let o = ckq(&["sphere", "--n", "4", "--sigma", "sigmaIV", "--j", "1,1,iota", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(json(&o).is_object());
}

#[test]
fn classify_vector_three() {
    let o = ckq(&["classify", "--n", "3", "--family", "vector", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_paper_flags_only_the_sphere_count() {
    let o = ckq(&["verify-paper", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(failing_ids(&v), ["classes S3, iota3"]);
    assert_eq!(v["fail"], 1);
}

#[test]
fn verify_paper_low_order_agrees() {
    let o = ckq(&["verify-paper", "--format", "json", "--order", "2"]);
    assert_eq!(failing_ids(&json(&o)), ["classes S3, iota3"]);
}

#[test]
fn corrupted_check_is_reported() {
    let o = ckq(&["verify-paper", "--corrupt", "31"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("31"));
    assert!(stdout(&o).contains("FAIL    [vector] 31"));
}

#[test]
fn verify_paper_json_is_deterministic() {
    let a = ckq(&["verify-paper", "--format", "json"]);
    let b = ckq(&["verify-paper", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_dir_flag_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = ckq(&["multiplier", "--n", "3", "--sigma", "1,3,2", "--format", "json", "--output-dir", d]);
    assert!(o.status.success());
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let written = std::fs::read(files[0].as_ref().unwrap().path()).unwrap();
    assert_eq!(serde_json::from_slice::<Value>(&written).unwrap(), json(&o));

    let env_dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ckq"))
        .args(["derive", "--n", "3", "--sigma", "sigma0", "--order", "3"])
        .env("CKQ_OUTPUT_DIR", env_dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read_dir(env_dir.path()).unwrap().count(), 1);
}
