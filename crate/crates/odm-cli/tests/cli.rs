//! End-to-end checks of the binary surface: flag handling, exit codes,
//! output-directory contents, and rerun determinism on a small config.

use std::path::Path;
use std::process::Command;

fn odm() -> Command {
    Command::new(env!("CARGO_BIN_EXE_odm"))
}

fn gen_tiny_data(dir: &Path) {
    let status = odm()
        .args([
            "gen-data",
            "--out",
            dir.to_str().unwrap(),
            "--corpus_bytes",
            "120000",
            "--train_count",
            "200",
            "--test_count",
            "50",
        ])
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn help_prints_usage_and_exits_zero() {
    let out = odm().arg("--help").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("usage: odm"));
}

#[test]
fn unknown_flag_form_is_a_usage_error() {
    let out = odm().args(["cipher-char", "bare-token", "--out", "/tmp/x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage: odm"));
}

#[test]
fn unknown_experiment_is_a_usage_error() {
    let out = odm().args(["frobnicate", "--out", "/tmp/x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown experiment"));
}

#[test]
fn missing_out_is_a_usage_error() {
    let out = odm().args(["gradcheck", "--seed", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = odm()
        .args(["gradcheck", "--out", dir.path().to_str().unwrap(), "--no_such_key", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown config key"));
}

#[test]
fn missing_data_file_maps_to_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = odm()
        .args([
            "cipher-char",
            "--out",
            dir.path().to_str().unwrap(),
            "--corpus",
            "/nonexistent/corpus.txt",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gradcheck_passes_and_writes_outputs_without_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let out = odm()
        .args([
            "gradcheck",
            "--out",
            dir.path().to_str().unwrap(),
            "--configs_per_kind",
            "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("max relative error"));
    assert!(dir.path().join("config.txt").exists());
    assert!(dir.path().join("metrics.csv").exists());
    assert!(dir.path().join("summary.json").exists());
    assert!(!dir.path().join("model.ckpt").exists(), "gradcheck never checkpoints");
}

#[test]
fn config_file_feeds_the_run_and_cli_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "configs_per_kind=2\nseed=5\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = odm()
        .args([
            "gradcheck",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--seed",
            "9",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let resolved = std::fs::read_to_string(out_dir.join("config.txt")).unwrap();
    assert!(resolved.contains("configs_per_kind=2"), "file value applies");
    assert!(resolved.contains("seed=9"), "cli override wins");
}

#[test]
fn cipher_char_run_is_rerun_deterministic_and_self_describing() {
    let data = tempfile::tempdir().unwrap();
    gen_tiny_data(data.path());
    let corpus = data.path().join("corpus.txt");

    let run = |out_dir: &Path| {
        let status = odm()
            .args([
                "cipher-char",
                "--out",
                out_dir.to_str().unwrap(),
                "--corpus",
                corpus.to_str().unwrap(),
                "--seed",
                "3",
                "--updates",
                "60",
                "--eval_every",
                "30",
                "--batch",
                "20",
            ])
            .status()
            .unwrap();
        assert!(status.success());
    };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(a.path());
    run(b.path());

    for name in ["config.txt", "metrics.csv", "summary.json", "model.ckpt"] {
        assert!(a.path().join(name).exists(), "{} missing", name);
        let bytes_a = std::fs::read(a.path().join(name)).unwrap();
        let bytes_b = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(bytes_a, bytes_b, "{} differs between identical runs", name);
    }
}
