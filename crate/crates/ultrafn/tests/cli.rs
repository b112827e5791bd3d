//! End-to-end tests of the `ultrafn` binary: exit codes, report schemas,
//! and byte-level determinism.

use std::process::{Command, Output};

fn ultrafn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ultrafn"))
        .args(args)
        .env_remove("UF_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn project_reports_convergence_for_gaussian() {
    let out = ultrafn(&["project", "--fn", "exp(-x^2/2)", "--levels", "8,16"]);
    let v = stdout_json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "project");
    let conv = v["convergence"].as_array().unwrap();
    assert_eq!(conv.len(), 1);
    let max_diff = conv[0]["max_diff"].as_f64().unwrap();
    assert!(max_diff <= 1e-8, "convergence max_diff {max_diff}");
}

#[test]
fn project_constant_has_unit_zero_coefficient() {
    let out = ultrafn(&[
        "project", "--fn", "1", "--levels", "4,8", "--emit", "coeffs",
    ]);
    let v = stdout_json(&out);
    for level in v["results"].as_array().unwrap() {
        for row in level["coeffs"].as_array().unwrap() {
            let expect = if row["l"] == 0 { 1.0 } else { 0.0 };
            let re = row["re"].as_f64().unwrap();
            let im = row["im"].as_f64().unwrap();
            assert!((re - expect).abs() < 1e-10 && im.abs() < 1e-10);
        }
    }
}

#[test]
fn parse_error_exits_2_with_json() {
    let out = ultrafn(&["project", "--fn", "x *", "--levels", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("stderr carries JSON");
    assert_eq!(err["schema"], 1);
    assert_eq!(err["error"]["kind"], "parse");
    assert_eq!(err["error"]["offset"], 3);
}

#[test]
fn eval_error_exits_2_with_json() {
    let out = ultrafn(&["project", "--fn", "1/(x-x)", "--levels", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "eval");
}

#[test]
fn empty_ladder_is_usage_error() {
    let out = ultrafn(&["verify", "--suite", "all", "--levels", ""]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "usage");
}

#[test]
fn pair_dirac_gaussian_shadows_to_one() {
    let out = ultrafn(&[
        "pair", "--dist", "dirac", "--test", "exp(-x^2/2)", "--levels", "4,8,16",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["command"], "pair");
    let shadow = &v["shadow"];
    let val = shadow["value"]["re"].as_f64().unwrap();
    assert!((val - 1.0).abs() < 1e-6, "shadow {val}");
    for level in v["results"].as_array().unwrap() {
        let re = level["value"]["re"].as_f64().unwrap();
        assert!((re - 1.0).abs() < 1e-4);
    }
}

#[test]
fn pair_heaviside_gaussian() {
    let out = ultrafn(&[
        "pair", "--dist", "heaviside", "--test", "exp(-x^2/2)", "--levels", "4,8,16",
    ]);
    let v = stdout_json(&out);
    let val = v["shadow"]["value"]["re"].as_f64().unwrap();
    let expect = (std::f64::consts::PI / 2.0).sqrt();
    assert!((val - expect).abs() < 1e-4, "shadow {val} vs {expect}");
}

#[test]
fn pair_accepts_distribution_file() {
    let dir = std::env::temp_dir().join("ultrafn-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("odd.json");
    std::fs::write(&path, r#"{"order":0,"base":"x*exp(-x^2)","label":"odd"}"#).unwrap();
    let out = ultrafn(&[
        "pair",
        "--dist",
        path.to_str().unwrap(),
        "--test",
        "exp(-x^2/2)",
        "--levels",
        "4,8,16",
    ]);
    let v = stdout_json(&out);
    // integral of an odd function against a Gaussian is 0
    let val = v["shadow"]["value"]["re"].as_f64().unwrap();
    assert!(val.abs() < 1e-8, "shadow {val}");
}

#[test]
fn fourier_of_gaussian_at_one() {
    let out = ultrafn(&[
        "fourier", "--fn", "exp(-x^2/2)", "--levels", "8", "--at", "1",
    ]);
    let v = stdout_json(&out);
    let row = &v["results"][0]["at"][0];
    let re = row["re"].as_f64().unwrap();
    let expect = (-0.5f64).exp(); // 0.60653
    assert!((re - expect).abs() < 1e-6, "got {re}, expected {expect}");
    assert!(row["offset"].as_f64().unwrap().abs() < v_freq_step(8) / 2.0 + 1e-12);
}

fn v_freq_step(n: u32) -> f64 {
    std::f64::consts::PI.sqrt() / n as f64
}

#[test]
fn fourier_of_dirac_at_zero_vanishes() {
    // the projection of D^2 ramp has zero mean, so the transform at k = 0
    // is exactly 0 (not 1/sqrt(2 pi): the representation carries its seam)
    let out = ultrafn(&["fourier", "--dist", "dirac", "--levels", "16", "--at", "0"]);
    let v = stdout_json(&out);
    let re = v["results"][0]["at"][0]["re"].as_f64().unwrap();
    assert!(re.abs() < 1e-9, "got {re}");
}

#[test]
fn verify_delta_suite_passes() {
    let out = ultrafn(&["verify", "--suite", "delta", "--levels", "4"]);
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    assert!(v["checks"].as_array().unwrap().len() >= 6);
}

#[test]
fn verify_all_passes_and_csv_has_header() {
    let out = ultrafn(&[
        "verify", "--suite", "fourier", "--levels", "4", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("suite,check,level,residual,tolerance,pass\n"));
    assert!(text.contains("fast path vs direct sum"));
}

#[test]
fn reports_are_byte_identical() {
    let args = [
        "project", "--fn", "exp(-x^2/2)", "--levels", "4,8", "--format", "csv",
    ];
    let a = ultrafn(&args);
    let b = ultrafn(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let args = ["verify", "--suite", "delta", "--levels", "4,8"];
    let a = ultrafn(&args);
    let b = ultrafn(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn uf_threads_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_ultrafn"))
        .args(["verify", "--suite", "grid", "--levels", "4,8"])
        .env("UF_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_ultrafn"))
        .args(["verify", "--suite", "grid", "--levels", "4"])
        .env("UF_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn output_file_is_written() {
    let dir = std::env::temp_dir().join("ultrafn-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid-report.json");
    let out = ultrafn(&[
        "verify",
        "--suite",
        "grid",
        "--levels",
        "4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn symmetric_grid_variant_runs() {
    let out = ultrafn(&[
        "verify", "--suite", "delta", "--levels", "4", "--grid", "symmetric",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["grid"], "symmetric");
}

#[test]
fn csv_floats_carry_17_significant_digits() {
    let out = ultrafn(&[
        "project", "--fn", "1", "--levels", "4", "--emit", "coeffs", "--format", "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().nth(1).unwrap();
    // n,l,k,re,im with full-precision scientific notation
    assert!(line.contains("e0") || line.contains("e-"), "{line}");
    let re_field = line.split(',').nth(3).unwrap();
    let mantissa = re_field.split('e').next().unwrap();
    let digits = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
    assert_eq!(digits, 17, "{re_field}");
}
