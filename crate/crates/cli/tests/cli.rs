//! End-to-end tests of the `selfsim` binary: document shapes, exit
//! codes, determinism, and the coefficients round trip.

use std::path::PathBuf;
use std::process::Output;

use serde_json::Value;

fn selfsim(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_selfsim"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout should be JSON")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

fn scratch_file(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("selfsim-{}-{}.json", name, std::process::id()))
}

const E1: [&str; 10] = [
    "--kind", "1", "--p", "3", "--q", "1", "--alpha", "0", "--beta", "0",
];

#[test]
fn params_reports_exact_values_for_third_order_model() {
    let out = selfsim(&[&["params"], &E1[..]].concat());
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["a"], "-1/3");
    assert_eq!(doc["b"], "-1/3");
    assert_eq!(doc["c"], "3");
    assert_eq!(doc["K"], "-1/27");
    assert_eq!(doc["gammas"], serde_json::json!(["0", "1/3", "2/3"]));
    assert_eq!(doc["b_printed_in_paper_differs"], false);
}

#[test]
fn params_rejects_invalid_spec_with_named_constraint() {
    let out = selfsim(&[
        "params", "--kind", "1", "--p", "3", "--q", "1", "--alpha", "3", "--beta", "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("alpha < p violated"));
}

#[test]
fn params_flags_divergent_published_b_for_kind_two() {
    let out = selfsim(&[
        "params", "--kind", "2", "--p", "3", "--q", "1", "--alpha", "1", "--beta", "1",
    ]);
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["b"], "-1");
    assert_eq!(doc["b_printed_in_paper_differs"], true);
}

#[test]
fn eval_emits_y_major_csv_with_positive_grid() {
    let out = selfsim(&[&["eval"], &E1[..]].concat());
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(!text.contains('\r'), "LF line endings only");
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "x,y,u0,u1,u2");
    assert_eq!(rows.len(), 5, "header plus 2x2 grid");
    // y-major: x cycles fastest
    let first_two: Vec<Vec<&str>> = rows[1..3].iter().map(|r| r.split(',').collect()).collect();
    assert_eq!(first_two[0][0], "1");
    assert_eq!(first_two[1][0], "2");
    assert_eq!(first_two[0][1], first_two[1][1], "same y across the x sweep");
    for row in &rows[1..] {
        let y: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(y > 0.0);
    }
}

#[test]
fn eval_output_is_bit_identical_across_runs() {
    let args = [
        &["eval"][..],
        &E1[..],
        &["--nx", "4", "--ny", "3", "--x0", "0.7", "--x1", "1.9"][..],
    ]
    .concat();
    let first = selfsim(&args);
    let second = selfsim(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn eval_node_agrees_with_pfq_oracle() {
    // at (x, y) = (1, 1): t = 1, y^b = 1, so u0 equals the reduced
    // series value at z = 1
    let eval_out = selfsim(&[
        &["eval"][..],
        &E1[..],
        &["--i", "0", "--nx", "1", "--ny", "1", "--x0", "1", "--x1", "1", "--y0", "1", "--y1", "1"][..],
    ]
    .concat());
    assert!(eval_out.status.success());
    let text = stdout_str(&eval_out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "x,y,u0");
    let u0: f64 = rows[1].split(',').nth(2).unwrap().parse().unwrap();

    let pfq_out = selfsim(&[&["pfq"], &E1[..], &["--i", "0", "--z", "1.0"]].concat());
    assert!(pfq_out.status.success());
    let doc = stdout_json(&pfq_out);
    let oracle = doc["eval"]["value"].as_f64().unwrap();
    assert!(
        ((u0 - oracle) / oracle).abs() < 1e-12,
        "u0 = {}, oracle = {}",
        u0,
        oracle
    );
}

#[test]
fn eval_rejects_nonpositive_grid() {
    let out = selfsim(&[&["eval"], &E1[..], &["--y0", "0"]].concat());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("strictly positive"));
}

#[test]
fn verify_passes_for_clean_families() {
    let out = selfsim(&[&["verify"], &E1[..]].concat());
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["all_interior_ok"], true);
    assert_eq!(doc["members"].as_array().unwrap().len(), 3);

    // non-integer weight case
    let out = selfsim(&[
        "verify", "--kind", "3", "--p", "3", "--q", "2", "--alpha", "1/2", "--beta", "1",
        "--numeric",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_str(&out));
    let doc = stdout_json(&out);
    for member in doc["members"].as_array().unwrap() {
        assert_eq!(member["interior_ok"], true);
        let max_rel = member["numeric"]["max_rel_residual"].as_f64().unwrap();
        assert!(max_rel < 1e-6, "member {} numeric {}", member["i"], max_rel);
    }
}

#[test]
fn verify_inject_fault_fails_with_exit_one() {
    let out = selfsim(&[&["verify"], &E1[..], &["--inject-fault"]].concat());
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["all_interior_ok"], false);
    assert!(stderr_str(&out).contains("first failing slot"));
}

#[test]
fn coeffs_round_trip_through_verify() {
    let coeffs = selfsim(&[&["coeffs"], &E1[..], &["--terms", "10"]].concat());
    assert!(coeffs.status.success());
    let doc = stdout_json(&coeffs);
    assert_eq!(doc["members"][0]["coeffs"][0], "1");
    assert_eq!(doc["members"][0]["coeffs"][1], "-1/18");

    let path = scratch_file("roundtrip");
    std::fs::write(&path, &coeffs.stdout).unwrap();
    let verify = selfsim(&[&["verify"], &E1[..], &["--coeffs", path.to_str().unwrap()]].concat());
    assert!(
        verify.status.success(),
        "round trip failed: {}",
        stderr_str(&verify)
    );

    // one corrupted digit must break the verification
    let mut doc = doc;
    doc["members"][0]["coeffs"][1] = Value::String("-1/17".into());
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let verify = selfsim(&[&["verify"], &E1[..], &["--coeffs", path.to_str().unwrap()]].concat());
    assert_eq!(verify.status.code(), Some(1));
    std::fs::remove_file(&path).ok();
}

#[test]
fn verify_rejects_mismatched_coefficient_file() {
    let coeffs = selfsim(&[&["coeffs"], &E1[..]].concat());
    let path = scratch_file("mismatch");
    std::fs::write(&path, &coeffs.stdout).unwrap();
    let verify = selfsim(&[
        "verify", "--kind", "1", "--p", "4", "--q", "1", "--coeffs",
        path.to_str().unwrap(),
    ]);
    assert_eq!(verify.status.code(), Some(2));
    assert!(stderr_str(&verify).contains("different equation"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn independence_exit_codes_follow_the_report() {
    let out = selfsim(&[&["independence"], &E1[..]].concat());
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["ok"], true);

    let out = selfsim(&[
        "independence", "--kind", "1", "--p", "3", "--q", "1", "--alpha", "2", "--beta", "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["alpha_integral_violation"], true);

    // forced collision at (i, s) = (1, 0) via b = s - i*a = 1/3
    let out = selfsim(&[&["independence"], &E1[..], &["--b", "1/3"]].concat());
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["violating_pairs"], serde_json::json!([[1, 0]]));
}

#[test]
fn pfq_reports_the_reduced_series() {
    let out = selfsim(&[&["pfq"], &E1[..], &["--i", "0"]].concat());
    assert!(out.status.success());
    let doc = stdout_json(&out);
    assert_eq!(doc["reduced"]["display"], "0F1(; 2/3; -1/27 z)");
    assert_eq!(doc["reduced"]["den_params"], serde_json::json!(["2/3"]));
    assert_eq!(doc["convergence_class"], "entire");
    assert_eq!(doc["terminates"], false);
}
