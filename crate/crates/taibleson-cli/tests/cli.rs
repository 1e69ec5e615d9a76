//! End-to-end tests of the binary: file round trips, determinism, exit
//! codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_taibleson"))
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name);
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

#[test]
fn zeta_of_sum_of_squares_is_the_classical_rational_function() {
    let out = run(&["zeta", "--poly", &fixture("sum_of_squares_p3.json")]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // x^2 + y^2 over Q_3: v(f) = 0 on the whole sphere, so
    // Z = (1 - p^{-2}) / (1 - p^{-2} t^2); canonically the denominator is
    // monic in its top degree: -8 / (t^2 - 9)
    assert_eq!(v["num"]["0"], "-8");
    assert_eq!(v["den"]["0"], "-9");
    assert_eq!(v["den"]["2"], "1");
}

#[test]
fn zeta_output_is_deterministic_and_reparses_to_the_same_form() {
    let a = run(&["zeta", "--poly", &fixture("anisotropic_p3.json")]);
    let b = run(&["zeta", "--poly", &fixture("anisotropic_p3.json")]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "byte-for-byte determinism");
    // round trip through the parser gives the identical canonical form
    let v: taibleson_cli::json::LaurentRationalJson = serde_json::from_slice(&a.stdout).unwrap();
    let parsed = taibleson_cli::json::laurent_rational_from_json(&v).unwrap();
    let re_emitted = taibleson_cli::json::laurent_rational_to_json(&parsed).unwrap();
    assert_eq!(
        serde_json::to_string(&v).unwrap(),
        serde_json::to_string(&re_emitted).unwrap()
    );
}

#[test]
fn norm_csv_shells_sum_to_the_total() {
    let out = run(&[
        "norm",
        "--phi",
        &fixture("twisted_p3_n1.json"),
        "--l",
        "1.5",
        "--format",
        "csv",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut total = None;
    let mut sum = 0f64;
    for line in text.lines().skip(1) {
        let (label, value) = line.split_once(',').unwrap();
        if label == "total" {
            total = Some(value.parse::<f64>().unwrap());
        } else {
            sum += value.parse::<f64>().unwrap();
        }
    }
    let total = total.expect("total row present");
    assert!((sum - total).abs() <= 1e-12 * total.abs().max(1.0));
}

#[test]
fn solve_reports_small_residuals() {
    let out = run(&[
        "solve",
        "--poly",
        &fixture("coordinate_p3.json"),
        "--alpha",
        "0.4",
        "--rhs",
        &fixture("mixed_rhs_p3_n1.json"),
        "--points",
        &fixture("points_p3_n1.json"),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["max_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["values"].as_array().unwrap().len(), 6);
}

#[test]
fn apply_and_kernel_commands_run() {
    let out = run(&[
        "apply",
        "--kind",
        "taibleson",
        "--alpha",
        "0.5",
        "--phi",
        &fixture("chi0_p3_n1.json"),
        "--points",
        &fixture("points_p3_n1.json"),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(&[
        "kernel",
        "--kind",
        "elliptic",
        "--poly",
        &fixture("sum_of_squares_p3.json"),
        "--alpha",
        "0.5",
        "--points",
        &fixture("points_p3_n1.json"),
    ]);
    assert!(!out.status.success()); // dimension mismatch: n=2 poly, n=1 points
    let out = run(&[
        "kernel",
        "--kind",
        "taibleson",
        "--poly",
        &fixture("coordinate_p3.json"),
        "--alpha",
        "1",
        "--points",
        &fixture("points_p3_n1.json"),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // alpha = n = 1: log kernel
    assert_eq!(v["base"]["kind"], "log");
}

#[test]
fn oracle_check_passes_on_band_limited_input() {
    let out = run(&[
        "oracle-check",
        "--phi",
        &fixture("twisted_p3_n1.json"),
        "--k",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn corrupt_input_exits_nonzero() {
    // 9 is not prime: input error, exit code 2
    let out = run(&["zeta", "--poly", &fixture("corrupt.json")]);
    assert_eq!(out.status.code(), Some(2));
    // missing file is also an input error
    let out = run(&["zeta", "--poly", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_elliptic_input_is_rejected_with_a_witness() {
    // x^2 + y^2 over Q_5 has sphere zeros (2^2 + 1^2 = 5)
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("iso.json");
    std::fs::write(
        &path,
        r#"{ "p": 5, "n": 2, "monomials": [ {"c":1,"e":[2,0]}, {"c":1,"e":[0,2]} ] }"#,
    )
    .unwrap();
    let out = run(&["zeta", "--poly", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("zero on the unit sphere"), "{msg}");
}
