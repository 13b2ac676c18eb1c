use std::path::PathBuf;
use std::process::Command;

use stable_extremum::cli::config::RunConfig;
use stable_extremum::cli::selftest::SelftestOptions;
use stable_extremum::cli::{self, EXIT_OK, EXIT_REGIME};
use stable_extremum::laplace;

fn write_config(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("stable-extremum-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["stable-extremum"];
    full.extend_from_slice(args);
    let code = cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const TABLE_ONE: &str = r#"{"alpha": 1.2, "beta": -0.2, "scale": 0.2, "convention": "sigma", "mu": -0.02, "T": 0.25,
  "points": [0.0125, 0.025, 0.0375, 0.05, 0.0625, 0.075], "method": "sinh", "eps": 1e-10}"#;

#[test]
fn supremum_rows_match_the_first_table() {
    let cfg = write_config("t1.json", TABLE_ONE);
    let (code, out, err) = run(&["cpdf-sup", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("x,a,value,method,eps_requested,est_error,wall_time_ms"));
    let reference = [0.13205969881037, 0.238098430142687, 0.339453622131327, 0.435754264935413, 0.524541403377567, 0.603375861525033];
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    for (row, r) in rows.iter().zip(reference) {
        let v: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!((v - r).abs() < 1e-9, "{row}");
    }
    assert!(!out.contains('\r'));
}

#[test]
fn asymmetric_index_one_with_sinh_is_a_regime_error() {
    let cfg = write_config(
        "a1.json",
        r#"{"alpha": 1.0, "c_plus": 0.2, "c_minus": 0.3, "T": 1.0, "points": [0.1], "method": "sinh"}"#,
    );
    let (code, _, err) = run(&["cpdf-sup", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, EXIT_REGIME);
    assert!(err.contains("regime"), "{err}");
}

#[test]
fn output_is_identical_across_thread_counts() {
    let cfg = write_config("det.json", TABLE_ONE);
    let c = cfg.to_str().unwrap();
    let (a, b) = (
        run(&["cpdf-sup", "--config", c, "--threads", "1", "--no-timing"]),
        run(&["cpdf-sup", "--config", c, "--threads", "8", "--no-timing"]),
    );
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a.1, b.1);
}

#[test]
fn unknown_config_keys_are_rejected() {
    assert!(RunConfig::from_json(r#"{"alpha": 1.2, "c_plus": 0.1, "c_minus": 0.1, "T": 1, "colour": 3}"#).is_err());
    let cfg = RunConfig::from_json(TABLE_ONE).unwrap();
    assert_eq!(cfg.levels().unwrap().len(), 6);
    assert!(cfg.cells().is_err());
    let bad = write_config("bad.json", r#"{"alpha": 1.2, "T": 1, "points": [0.1]}"#);
    assert_ne!(run(&["cpdf-sup", "--config", bad.to_str().unwrap()]).0, EXIT_OK);
}

#[test]
fn exchange_points_are_read_from_objects() {
    let cfg = write_config(
        "ex.json",
        r#"{"alpha": 1.2, "c_plus": 0.05, "c_minus": 0.05, "T": 0.25,
            "points": [{"beta": 2.0, "lambda": 0.5}], "method": "sinh", "eps": 1e-10}"#,
    );
    let (code, out, err) = run(&["exchange", "--config", cfg.to_str().unwrap(), "--no-timing"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let row = out.lines().nth(1).unwrap();
    let v: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
    assert!((v - 0.04355992164934).abs() < 1e-10, "{row}");
}

#[test]
fn first_table_benchmark_passes() {
    let (code, out, err) = run(&["bench-tables", "--table", "1", "--eps", "1e-10", "--no-timing"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert_eq!(out.lines().count(), 7);
    assert!(out.lines().next().unwrap().starts_with("table,point,value,reference,abs_error,cpu_ms"));
}

fn corrupted_weights(m: usize) -> Vec<f64> {
    let mut w = laplace::gaver_stehfest_weights(m);
    w[3] *= 1.01;
    w
}

#[test]
fn selftest_detects_corrupted_weights() {
    let mut out = Vec::new();
    assert_eq!(cli::selftest_report(&SelftestOptions::default(), &mut out), EXIT_OK, "{}", String::from_utf8_lossy(&out));
    let mut out = Vec::new();
    let opts = SelftestOptions { gaver_weights: corrupted_weights, ..Default::default() };
    assert_ne!(cli::selftest_report(&opts, &mut out), EXIT_OK);
    assert!(String::from_utf8(out).unwrap().contains("FAIL"));
}

#[test]
fn binary_reports_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_stable-extremum");
    let cfg = write_config(
        "bin.json",
        r#"{"alpha": 1.0, "c_plus": 0.2, "c_minus": 0.3, "T": 1.0, "points": [-0.1], "method": "gwr"}"#,
    );
    let o = Command::new(bin).args(["cpdf-sup", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_REGIME));
    let o = Command::new(bin).args(["cpdf-x", "--config", cfg.to_str().unwrap(), "--method", "fourier"]).output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&o.stderr));
}
