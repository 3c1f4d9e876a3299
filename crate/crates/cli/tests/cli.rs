//! End-to-end tests of the binary: exit codes, determinism, formats, and
//! the config-file merge.

use std::io::Write;
use std::process::{Command, Output};

fn plhardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plhardy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn exponents_closed_form_report() {
    let out = plhardy(&[
        "exponents",
        "--p",
        "2",
        "--N",
        "3",
        "--lambda",
        "0.1875",
        "--no-timestamp",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["status"], "ok");
    let lower = v["result"]["alpha_lower"].as_f64().unwrap();
    let upper = v["result"]["alpha_upper"].as_f64().unwrap();
    assert!((lower + 0.75).abs() < 1e-12);
    assert!((upper + 0.25).abs() < 1e-12);
    assert_eq!(v["result"]["m_star"], 2);
}

#[test]
fn reports_are_byte_identical_without_timestamp() {
    let args = [
        "table1",
        "--p",
        "3",
        "--N",
        "5",
        "--eps-list",
        "0,mid,cstar",
        "--seed",
        "11",
        "--no-timestamp",
    ];
    let a = plhardy(&args);
    let b = plhardy(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn domain_error_exits_2_with_payload() {
    let out = plhardy(&["exponents", "--p", "2", "--N", "3", "--lambda", "0.9"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["status"], "error");
    assert_eq!(v["error"]["kind"], "domain");
}

#[test]
fn usage_error_exits_64() {
    let out = plhardy(&["exponents", "--p", "2"]);
    assert_eq!(out.status.code(), Some(64));
    let out = plhardy(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn mixed_sign_classification_exits_3() {
    // A tabulated potential oscillating around the coupling of r^(-1/2)
    // keeps both residual signs alive on every suffix.
    let pr_coupling = 0.25; // lambda_alpha at p=2, N=3, alpha=-1/2
    let mut f = tempfile::NamedTempFile::new().unwrap();
    let mut r = 1.5f64;
    while r < 2e4 {
        let wobble = if (r.ln() * 8.0).sin() > 0.0 { 1.5 } else { 0.5 };
        writeln!(f, "{r},{}", pr_coupling * wobble / r.powi(2)).unwrap();
        r *= 1.02;
    }
    f.flush().unwrap();
    let table = format!("table:{}", f.path().display());
    let out = plhardy(&[
        "classify",
        "--p",
        "2",
        "--N",
        "3",
        "--potential",
        &table,
        "--alpha",
        "-0.5",
        "--r0",
        "2",
        "--rmax",
        "1e4",
        "--no-timestamp",
    ]);
    assert_eq!(out.status.code(), Some(3), "stdout: {}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["verdict"], "MixedSign");
    assert_eq!(v["result"]["rho0"], serde_json::Value::Null);
}

#[test]
fn classify_csv_schema() {
    let out = plhardy(&[
        "classify",
        "--p",
        "2",
        "--N",
        "3",
        "--potential",
        "hardy:0.1875",
        "--alpha",
        "-0.75",
        "--r0",
        "1.5",
        "--rmax",
        "100",
        "--nodes",
        "64",
        "--out",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,u,u',residual,scaled_residual"));
    assert_eq!(lines.count(), 64);
}

#[test]
fn integrate_csv_schema_and_trajectory() {
    let out = plhardy(&[
        "integrate",
        "--p",
        "2",
        "--N",
        "3",
        "--potential",
        "hardy:0.1875",
        "--r0",
        "1",
        "--phi0",
        "1",
        "--dphi0",
        "-0.75",
        "--rmax",
        "100",
        "--tol",
        "1e-9",
        "--out",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,phi,dphi,flux,local_exponent"));
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 5);
        let exact = cols[0].powf(-0.75);
        assert!((cols[1] - exact).abs() <= 1e-6 * exact);
    }
}

#[test]
fn solve_bvp_hits_harmonic_interpolant() {
    let out = plhardy(&[
        "solve-bvp",
        "--p",
        "2",
        "--N",
        "3",
        "--potential",
        "zero",
        "--r0",
        "1",
        "--R0",
        "2",
        "--inner",
        "1",
        "--outer",
        "0.5",
        "--tol",
        "1e-10",
        "--no-timestamp",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let defect = v["result"]["outer_defect"].as_f64().unwrap();
    assert!(defect.abs() <= 1e-10 * 1.5);
}

#[test]
fn pl_check_alternatives() {
    let out = plhardy(&[
        "pl-check", "--p", "3", "--N", "5", "--u", "-1.2", "--w", "-0.8", "--r0", "2",
        "--no-timestamp",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["trend"], "VanishingMonotone");
    assert_eq!(v["result"]["supported_alternative"], "Domination");
    assert_eq!(v["result"]["finite_horizon"], true);
}

#[test]
fn verify_superposition_trials_deterministic() {
    let args = [
        "verify-superposition",
        "--p",
        "2.5",
        "--N",
        "4",
        "--potential",
        "hardy:0.2",
        "--trials",
        "25",
        "--seed",
        "42",
        "--r0",
        "2",
        "--rmax",
        "500",
        "--nodes",
        "96",
        "--no-timestamp",
    ];
    let a = plhardy(&args);
    assert_eq!(a.status.code(), Some(0), "stdout: {}", stdout(&a));
    let b = plhardy(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["result"]["failures"], 0);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "p = 2.0").unwrap();
    writeln!(f, "N = 3").unwrap();
    writeln!(f, "lambda = 0.25   # critical coupling").unwrap();
    f.flush().unwrap();
    let config = f.path().to_str().unwrap().to_string();

    let out = plhardy(&["exponents", "--config", &config, "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "stdout: {}", stdout(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["alpha_degenerate"], true);

    // An explicit flag overrides the config entry.
    let out = plhardy(&[
        "exponents",
        "--config",
        &config,
        "--lambda",
        "0.1875",
        "--no-timestamp",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["alpha_degenerate"], false);
    assert!((v["result"]["alpha_lower"].as_f64().unwrap() + 0.75).abs() < 1e-12);
}

#[test]
fn output_file_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = plhardy(&[
        "exponents",
        "--p",
        "3",
        "--N",
        "5",
        "--output",
        path.to_str().unwrap(),
        "--no-timestamp",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "exponents");
}

#[test]
fn csv_rejected_where_unsupported() {
    let out = plhardy(&["exponents", "--p", "2", "--N", "3", "--out", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}
