//! End-to-end checks of the command line: output values, exit codes, and
//! byte-level determinism under fixed seeds.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_occucert"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("spawn occucert");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("occucert-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn analyze_reports_the_reference_star_values() {
    let (code, stdout, _) = run(&["analyze", "--family", "star:2", "--lambda", "7/5"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("497/494"), "bound missing: {stdout}");
    assert!(stdout.contains("203/179"), "expected size missing: {stdout}");
    assert!(stdout.contains("11319/88426"), "gap missing: {stdout}");
}

#[test]
fn analyze_single_vertex_at_unit_fugacity() {
    let (code, stdout, _) = run(&["analyze", "--family", "complete:1", "--lambda", "1"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("1/2"), "expected size missing: {stdout}");
}

#[test]
fn counterexample_prints_the_three_numbers() {
    let (code, stdout, _) = run(&["counterexample"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).expect("json");
    assert_eq!(v["optimum"], "1");
    assert_eq!(v["bound"], "497/494");
    assert_eq!(v["expected_size"], "203/179");
    assert_eq!(v["candidate_feasible"], true);
}

#[test]
fn constants_match_published_truncations() {
    let (code, stdout, _) = run(&["constants"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("0.10959728"), "c0 missing: {stdout}");
    assert!(stdout.contains("0.0896883"), "eta missing: {stdout}");
}

#[test]
fn frac_color_certifies_a_feasible_demand() {
    let (code, stdout, _) = run(&[
        "frac-color",
        "--family",
        "path:3",
        "--lambda",
        "1/4",
        "--strict",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).expect("json");
    assert_eq!(v["verdict"]["certifying"], true);
}

#[test]
fn certify_exits_one_when_no_certificate_exists() {
    let (code, stdout, _) = run(&["certify", "--family", "complete:3", "--lambda", "7/5"]);
    assert_eq!(code, 1, "stdout: {stdout}");
}

#[test]
fn malformed_graph_file_is_an_input_error() {
    let path = temp_path("malformed.json");
    std::fs::write(&path, "{\"n\": 3, \"edges\": [[0]]").unwrap();
    let (code, _, stderr) = run(&["analyze", "--graph", path.to_str().unwrap(), "--lambda", "1"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 2, "stderr: {stderr}");
}

#[test]
fn unknown_family_is_an_input_error() {
    let (code, _, _) = run(&["analyze", "--family", "moebius:7", "--lambda", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn oversized_component_exits_with_the_cap_code() {
    let (code, _, _) = run(&["analyze", "--family", "cycle:30", "--lambda", "1/10"]);
    assert_eq!(code, 3);
}

#[test]
fn cap_env_variable_is_honored() {
    let out = bin()
        .args(["analyze", "--family", "cycle:5", "--lambda", "1/10"])
        .env("OCCUCERT_CAP", "4")
        .output()
        .expect("spawn occucert");
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn cap_flag_overrides_the_environment() {
    let out = bin()
        .args(["analyze", "--family", "cycle:5", "--lambda", "1/10", "--cap", "8"])
        .env("OCCUCERT_CAP", "4")
        .output()
        .expect("spawn occucert");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn seeded_reports_are_byte_identical() {
    let args = ["analyze", "--family", "er:8,0.35", "--lambda", "1/9", "--seed", "42"];
    let (c1, s1, _) = run(&args);
    let (c2, s2, _) = run(&args);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(s1, s2, "same seed must reproduce the report bytes");
    let (_, s3, _) = run(&[
        "analyze", "--family", "er:8,0.35", "--lambda", "1/9", "--seed", "43",
    ]);
    assert_ne!(s1, s3, "different seeds should draw different graphs");
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let path = temp_path("report.json");
    let (code, stdout, _) = run(&[
        "analyze",
        "--family",
        "star:2",
        "--lambda",
        "7/5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty(), "report should go to the file only");
    let body = std::fs::read_to_string(&path).expect("report file");
    std::fs::remove_file(&path).ok();
    let v: serde_json::Value = serde_json::from_str(&body).expect("json");
    assert_eq!(v["bound"], "497/494");
}
