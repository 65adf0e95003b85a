use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn unruh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unruh")).args(args).env_remove("UNRUH_OUTPUT_DIR").output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("unruh-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn error_record(out: &Output) -> Value {
    serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap()
}

#[test]
fn rates_table_shape_and_signs() {
    let out = unruh(&["rates", "--wbar", "0.5", "--tau-max", "10", "--samples", "400"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("taubar,g1,g2,g3,g3_closed_form,delta_fdot_plus,delta_fdot_minus\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 400);
    assert!(rows.iter().all(|r| r[1] > 0.0));
    assert!(rows.iter().all(|r| (r[3] - r[4]).abs() < 1e-8));

    let hot = String::from_utf8(unruh(&["rates", "--wbar", "4.0", "--tau-max", "10", "--samples", "200"]).stdout).unwrap();
    assert!(data_rows(&hot).iter().any(|r| r[2] < 0.0));
}

#[test]
fn physical_units_scale_columns() {
    let out = unruh(&["rates", "--omega", "1.0", "--alpha", "2.0", "--samples", "20", "--tau-max", "2", "--physical"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"omegabar\":2.0"));
    for r in data_rows(&text) {
        assert!((r[7] - 2.0 * r[0]).abs() < 1e-14);
        assert!((r[8] - r[1] / (2.0 * std::f64::consts::PI)).abs() < 1e-14);
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["rates", "--wbar", "0"][..],
        &["rates"],
        &["cp", "--wbar", "1", "--omega", "1"],
        &["evolve", "--wbar", "1", "--init", "z=3"],
        &["frobnicate"],
        &["cp", "--wbar", "1", "--samples", "4"],
    ] {
        let out = unruh(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let rec = error_record(&out);
        assert_eq!(rec["error"], "usage");
        assert_eq!(rec["exit_code"], 2);
    }
}

#[test]
fn dephasing_only_allows_zero_gap() {
    let out = unruh(&["rates", "--wbar", "0", "--dephasing-only", "--samples", "32"]);
    assert!(out.status.success());
}

#[test]
fn failed_scan_reports_grid() {
    let out = unruh(&["scan", "--target", "gamma2", "--wbar-min", "1.2", "--wbar-max", "2.0"]);
    assert_eq!(out.status.code(), Some(3));
    let rec = error_record(&out);
    assert_eq!(rec["error"], "numerical");
    assert_eq!(rec["scan_grid"].as_array().unwrap().len(), 16);
}

#[test]
fn unwritable_output_exits_four() {
    let out = unruh(&["cp", "--wbar", "1.0", "--output", "/nonexistent-dir/x/cp.csv"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(error_record(&out)["error"], "io");
}

#[test]
fn scan_json_fields() {
    let out = unruh(&["scan", "--target", "gamma2", "--wbar-min", "0.5", "--wbar-max", "2.0"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let t = v["threshold"].as_f64().unwrap();
    assert!((0.9..=1.1).contains(&t));
    for key in ["bracket_lo", "bracket_hi", "min_witness", "argmin_taubar", "config_sha256", "version"] {
        assert!(!v[key].is_null(), "{key}");
    }
}

#[test]
fn cp_verdict_and_baseline_evolution() {
    let out = String::from_utf8(unruh(&["cp", "--wbar", "2.0"]).stdout).unwrap();
    assert!(out.contains("# verdict: \"Violated\""));
    let ev = String::from_utf8(unruh(&["evolve", "--wbar", "0.2", "--init", "z=+1", "--markovian-baseline"]).stdout).unwrap();
    let pg: Vec<f64> = data_rows(&ev).iter().map(|r| r[5]).collect();
    assert!(pg.windows(2).all(|p| p[1] >= p[0]));
}

#[test]
fn config_file_and_override() {
    let dir = scratch("config");
    let conf = dir.join("run.conf");
    std::fs::write(&conf, "# cp run\nwbar = 2.0\ntau_max = 6\nsamples = 61\n").unwrap();
    let c = conf.to_str().unwrap();
    let a = String::from_utf8(unruh(&["cp", "--config", c]).stdout).unwrap();
    assert!(a.contains("\"wbar\":2.0") && a.contains("\"samples\":61"));
    let b = String::from_utf8(unruh(&["cp", "--config", c, "--wbar", "1.0"]).stdout).unwrap();
    assert!(b.contains("\"wbar\":1.0"));
    assert!(b.contains("# verdict: \"Satisfied\""));
    let missing = unruh(&["cp", "--config", "/nonexistent.conf"]);
    assert_eq!(missing.status.code(), Some(4));
}

#[test]
fn output_directory_from_environment() {
    let dir = scratch("env");
    let out = Command::new(env!("CARGO_BIN_EXE_unruh"))
        .args(["reversed", "--wbar", "0.2"])
        .env("UNRUH_OUTPUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("reversed.json")).unwrap()).unwrap();
    assert_eq!(v["all_negative"], true);
}

#[test]
fn describe_and_help() {
    for cmd in ["rates", "cp", "scan", "evolve", "backflow", "reversed"] {
        let out = unruh(&[cmd, "--describe"]);
        assert!(out.status.success() && !out.stdout.is_empty(), "{cmd}");
    }
    assert!(unruh(&["--help"]).status.success());
}

#[test]
fn backflow_columns() {
    let out = unruh(&["backflow", "--wbar", "0.5", "--pairs", "25", "--tau-max", "5", "--samples", "51"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("taubar,E,D,sigma,P_D\n"));
    let rows = data_rows(&text);
    assert!((rows[0][1] - 1.0).abs() < 1e-12);
    assert!(rows.iter().all(|r| r[3] <= 1e-8 && (r[4] - 0.5 * (1.0 + r[2])).abs() < 1e-15));
    assert!(text.contains("# blp_measure: 0.0"));
}
