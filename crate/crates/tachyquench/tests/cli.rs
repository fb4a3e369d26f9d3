//! Command-line surface: exit codes, config validation, output formats
//! and byte-level reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tachyquench"))
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

#[test]
fn mode_report_runs_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"sites_per_dim": 41, "m0": 2.0, "m_sq_final": -1.0}"#);
    let out = run_in(
        dir.path(),
        &["mode-report", "--config", cfg.to_str().unwrap(), "--out", "modes.csv"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let first = std::fs::read(dir.path().join("modes.csv")).unwrap();
    let header = String::from_utf8_lossy(&first);
    assert!(header.starts_with("n_0,k_0,omega0,omega_sq,class,beta_eff,xi\n"));
    // Unstable k = 0 row carries xi but no beta_eff, and its
    // omega_sq equals the post-quench mass squared.
    assert!(header.contains(",unstable,,"));
    assert!(
        header.lines().any(|l| l.starts_with("0.0000000000000000e0,0.0000000000000000e0,")
            && l.contains("-1.0000000000000000e0,unstable,,1.0000000000000000e0")),
        "k = 0 row should read omega_sq = m_sq_final and xi = 1"
    );

    // Re-run: byte identical.
    let out = run_in(
        dir.path(),
        &["mode-report", "--config", cfg.to_str().unwrap(), "--out", "modes2.csv"],
    );
    assert!(out.status.success());
    let second = std::fs::read(dir.path().join("modes2.csv")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn outputs_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"sites_per_dim": 401, "ct_max": 40.0, "t_steps": 9, "r_max": 150}"#,
    );
    let mut files = Vec::new();
    for (threads, name) in [("1", "a.csv"), ("5", "b.csv")] {
        let out = bin()
            .current_dir(dir.path())
            .env("TACHYQUENCH_THREADS", threads)
            .args(["lightcone", "--config", cfg.to_str().unwrap(), "--out", name])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        files.push(std::fs::read(dir.path().join(name)).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn csv_values_carry_17_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"sites_per_dim": 41, "m0": 2.0, "m_sq_final": -1.0}"#);
    let out = run_in(
        dir.path(),
        &["mode-report", "--config", cfg.to_str().unwrap(), "--out", "modes.csv"],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("modes.csv")).unwrap();
    let line = text.lines().nth(1).unwrap();
    let omega0 = line.split(',').nth(2).unwrap();
    // Mantissa of 1 + 16 digits.
    let mantissa = omega0.split('e').next().unwrap();
    let digits: usize = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
    assert_eq!(digits, 17, "field {omega0}");
}

#[test]
fn json_format_emits_records() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"sites_per_dim": 9, "m0": 2.0, "m_sq_final": 1.0}"#);
    let out = run_in(
        dir.path(),
        &[
            "mode-report",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            "modes.json",
            "--format",
            "json",
        ],
    );
    assert!(out.status.success());
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("modes.json")).unwrap())
            .unwrap();
    assert_eq!(parsed.as_array().unwrap().len(), 9);
    assert!(parsed[0]["omega0"].is_number());
    assert_eq!(parsed[0]["class"], "stable");
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"sites_per_dim": 41, "separaations": [1]}"#);
    let out = run_in(dir.path(), &["lightcone", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("separaations"), "{err}");
}

#[test]
fn invalid_spec_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    // Even site count violates the odd-grid requirement.
    let cfg = write_config(dir.path(), r#"{"sites_per_dim": 40}"#);
    let out = run_in(dir.path(), &["mode-report", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn experiment_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"experiment": "mi-cuts"}"#);
    let out = run_in(dir.path(), &["lightcone", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_failure_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    // An unattainable suppression tolerance turns the causality gate red.
    let cfg = write_config(
        dir.path(),
        r#"{"sites_per_dim": 401, "ct_max": 40.0, "t_steps": 9, "r_max": 150, "suppression_tolerance": 1e-30}"#,
    );
    let out = run_in(dir.path(), &["lightcone", "--config", cfg.to_str().unwrap(), "--out", "lc.csv"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("CHECK causal suppression: FAIL"), "{stdout}");
}

#[test]
fn numeric_range_error_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // mt_max = 400 pushes xi*t past the entropy-path overflow guard.
    let cfg = write_config(
        dir.path(),
        r#"{"sites_per_dim": 401, "m_sq_values": [-0.25], "blocks": [1], "mt_max": 400.0, "fit_window_mt": [6.0, 10.0], "t_steps": 9}"#,
    );
    let out = run_in(dir.path(), &["ee-growth", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the overflow guard"));
}

#[test]
fn mi_cuts_small_lattice_onsets() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"sites_per_dim": 401, "m_sq_final": -4.0, "separations": [20, 40], "block_size": 2,
            "ct_max": 30.0, "ct_step": 0.5, "onset_check_separations": [20]}"#,
    );
    let out = run_in(dir.path(), &["mi-cuts", "--config", cfg.to_str().unwrap(), "--out", "mi.csv"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}\n{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout.contains("CHECK onset r=20: PASS"), "{stdout}");
    // r = 40 is reported but not gated.
    assert!(stdout.contains("r = 40: onset"), "{stdout}");
    assert!(!stdout.contains("CHECK onset r=40"), "{stdout}");
}

#[test]
fn lr_check_runs_clean() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"sites_per_dim": 15, "omega": 5.0, "m0": 1.0, "m_sq_final": 1.0}"#);
    let out = run_in(dir.path(), &["lr-check", "--config", cfg.to_str().unwrap(), "--out", "lr.csv"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("CHECK domination m_sq=1: PASS"));
    assert!(stdout.contains("CHECK domination m_sq=-1: PASS"));
    let text = std::fs::read_to_string(dir.path().join("lr-msq1.csv")).unwrap();
    assert!(text.starts_with("n,m,t,exact,bound,margin\n"));
}

#[test]
fn bad_thread_env_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .current_dir(dir.path())
        .env("TACHYQUENCH_THREADS", "zero")
        .args(["mode-report"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
