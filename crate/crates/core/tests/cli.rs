use std::process::{Command, Output};

use serde_json::Value;

fn catconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_catconv"))
        .args(args)
        .output()
        .expect("catconv binary runs")
}

fn json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).expect("stdout is a JSON report")
}

#[test]
fn verify_sweep_reports_every_case() {
    let out = catconv(&[
        "verify",
        "--identity",
        "thm-a",
        "--n",
        "0..40",
        "--lambda",
        "0..10",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["command"], "verify");
    assert_eq!(report["cases_run"], 451);
    assert_eq!(report["skipped"], 0);
    assert_eq!(report["failures"], Value::Array(vec![]));
    assert!(report["elapsed_ms"].is_u64());
    assert_eq!(report["config_echo"]["n"], "0..40");
}

#[test]
fn coefficient_check_passes() {
    let out = catconv(&[
        "coeffs",
        "--formula",
        "bailey-dixon",
        "--a",
        "1",
        "--c",
        "2",
        "--order",
        "16",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

#[test]
fn odd_integral_is_zero() {
    let out = catconv(&[
        "integral", "--which", "thm-a", "--n", "1", "--lambda", "3", "--prec", "40", "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let check = &report["checks"][0];
    assert_eq!(check["passed"], true);
    let value: f64 = check["value"].as_str().unwrap().parse().unwrap();
    assert!(value.abs() < 1e-40);
}

#[test]
fn json_is_deterministic_without_timing() {
    let args = [
        "--no-timing",
        "--format",
        "json",
        "verify",
        "--identity",
        "prop-b",
        "--n",
        "0..12",
        "--a",
        "1/2,3/2",
        "--c",
        "2/3,1",
    ];
    let first = catconv(&args);
    let second = catconv(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(json(&first).get("elapsed_ms").is_none());
    let with_jobs = catconv(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(first.stdout, with_jobs.stdout);
}

#[test]
fn rationals_are_serialized_exactly() {
    let out = catconv(&[
        "--format",
        "json",
        "verify",
        "--identity",
        "cor-2",
        "--n",
        "1",
        "--lambda",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let failure = &report["failures"][0];
    assert_eq!(failure["lhs"], "2/3");
    assert_eq!(failure["rhs"], "1/1");
    assert_eq!(failure["params"]["n"], "1");
    assert_eq!(report["findings"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        catconv(&["verify", "--identity", "thm-a", "--n", "5..2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        catconv(&["verify", "--identity", "nope", "--n", "0..2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        catconv(&["gamma-selftest", "--prec", "12"]).status.code(),
        Some(2)
    );
    assert_eq!(catconv(&["frobnicate"]).status.code(), Some(2));
    let out = catconv(&[
        "--format", "json", "numeric", "dixon", "--a", "1/2", "--c", "1/2", "--e", "1/2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].as_str().unwrap().contains("margin"));
}

#[test]
fn starved_series_exits_three() {
    let out = catconv(&[
        "numeric",
        "dminus",
        "--a",
        "3",
        "--c",
        "1/2",
        "--e",
        "1/2",
        "--max-terms",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn numeric_checks_pass() {
    let out = catconv(&[
        "numeric",
        "linear4f3",
        "--a",
        "-6",
        "--c",
        "1/3",
        "--e",
        "1/5",
        "--lambda",
        "2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert_eq!(
        catconv(&["numeric", "dixon", "--a", "1/2,1", "--c", "1/4", "--e", "1/4"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        catconv(&["gamma-selftest", "--prec", "25"]).status.code(),
        Some(0)
    );
}

#[test]
fn terminating_and_contiguous_commands() {
    for cmd in ["terminating", "contiguous"] {
        let out = catconv(&[
            "--format", "json", cmd, "--n", "0..10", "--c", "1/3,2", "--e", "1/5", "--lambda",
            "1,5/2",
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(json(&out)["cases_run"], 44);
    }
}

#[test]
fn report_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("catconv-report-{}.json", std::process::id()));
    let out = catconv(&[
        "--no-timing",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
        "gamma-selftest",
        "--prec",
        "30",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, out.stdout);
}
