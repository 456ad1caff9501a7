use std::process::{Command, Output};

use serde_json::Value;

fn quadsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadsum")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = quadsum(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).expect("valid JSON")
}

#[test]
fn first_zero_of_z2_as_csv() {
    let out = quadsum(&["zeta", "--n", "2", "--zeros", "0", "10", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 1, "{text}");
    assert!(lines[0].starts_with("3.39927"), "{text}");
}

#[test]
fn zero_leading_coefficient_is_an_input_error() {
    let out = quadsum(&["recip-check", "--a", "0", "--b", "1", "--c", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_subcommand_prints_usage() {
    let out = quadsum(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn exact_gauss_sum_reports_exact_equality() {
    let v = json(&["--backend", "exact", "gauss-sum", "--a", "1", "--b", "0", "--c", "2"]);
    assert_eq!(v["exact_equal"], Value::Bool(true));
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["values"][0]["exact"], "z with z = e(1/8)");
    assert!(v["values"][0]["re"].as_str().unwrap().starts_with("7.0710678118654752440"));
}

#[test]
fn negative_arguments_are_accepted() {
    let v = json(&["recip-check", "--a", "-3", "--b", "1", "--c", "5"]);
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(v["residual"].is_string());
}

#[test]
fn json_numbers_are_decimal_strings() {
    let v = json(&["zeta", "--n", "6", "--s", "0.25,3"]);
    for key in ["residual", "tolerance", "prec_bits", "elapsed_ms"] {
        assert!(v[key].is_string(), "{key}");
    }
    for value in v["values"].as_array().unwrap() {
        value["re"].as_str().unwrap().parse::<f64>().unwrap();
        value["im"].as_str().unwrap().parse::<f64>().unwrap();
    }
}

#[test]
fn reruns_are_identical_apart_from_timing() {
    let args = ["nd-recip", "--t", r#"[["3/5"]]"#, "--s", r#"["1/10"]"#];
    let mut a = json(&args);
    let mut b = json(&args);
    a["elapsed_ms"] = Value::Null;
    b["elapsed_ms"] = Value::Null;
    assert_eq!(a, b);
}

#[test]
fn exact_backend_is_rejected_for_analytic_commands() {
    let out = quadsum(&["--backend", "exact", "zeta", "--n", "2", "--s", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn odd_zeta_index_is_an_input_error() {
    assert_eq!(quadsum(&["zeta", "--n", "3", "--s", "1,1"]).status.code(), Some(2));
}

#[test]
fn reduced_form_reads_a_matrix_file() {
    let dir = std::env::temp_dir().join(format!("quadsum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    std::fs::write(&path, r#"[["1/2", "1/3"], ["1/3", 2]]"#).unwrap();
    let v = json(&["reduced-form", "--file", path.to_str().unwrap()]);
    assert_eq!(v["details"]["det_B"], "18");
    assert_eq!(v["details"]["signature"], "2");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn theta_identities_pass_at_default_tolerance() {
    let cases: [&[&str]; 4] = [
        &["theta-check", "jfe", "--z", "0.3,0.1", "--tau", "0.2,1.1"],
        &["theta-check", "tkm", "--k", "1", "--m", "3", "--z", "0.3,0.1", "--tau", "0.2,1.1"],
        &["theta-check", "average", "--a", "3", "--b", "2", "--c", "0", "--z", "0.3,0.1", "--tau", "0.2,1.1"],
        &["theta-check", "thmb", "--t", r#"[["3/5"]]"#, "--c", r#"["1/2"]"#, "--height", "1e4"],
    ];
    for args in cases {
        assert_eq!(json(args)["passed"], Value::Bool(true), "{args:?}");
    }
}

#[test]
fn theta_reports_truncation() {
    let v = json(&["theta", "--z", r#"["0.1,0.2"]"#, "--tau", r#"[["0.1,1.2"]]"#]);
    assert!(v["details"]["truncation_radius"].as_str().unwrap().parse::<u64>().unwrap() > 0);
    assert!(v["details"]["tail_bound"].as_str().unwrap().parse::<f64>().unwrap() < 1e-25);
}

#[test]
fn missing_theta_input_is_an_input_error() {
    assert_eq!(quadsum(&["theta-check", "tkm", "--z", "0", "--tau", "0,1"]).status.code(), Some(2));
}

#[test]
fn unattainable_tolerance_exits_with_one() {
    let out = quadsum(&["--tol", "1e-45", "theta-check", "jfe", "--z", "0.3,0.1", "--tau", "0.2,1.1", "--csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("passed,false"));
}
