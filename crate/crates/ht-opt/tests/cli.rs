use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ht_opt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ht-opt"))
        .args(args)
        .env_remove("HT_OPT_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn validate_reports_pass_and_fail() {
    let ok = ht_opt(&[
        "validate", "--beta", "0.1", "--gamma", "0.02", "--mode", "smooth",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("result=pass"));

    let bad = ht_opt(&[
        "validate", "--beta", "0.1", "--gamma", "10", "--mode", "smooth",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let text = stdout(&bad);
    assert!(text.contains("FAIL gamma-bound"));
    assert!(text.contains("result=fail"));
}

#[test]
fn malformed_arguments_are_usage_errors() {
    assert_eq!(
        ht_opt(&["validate", "--beta", "x", "--gamma", "1", "--mode", "smooth"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ht_opt(&["gradcheck", "--family", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(ht_opt(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn gradcheck_passes_for_every_family() {
    for family in ["quadratic-regression", "logsumexp", "regularized"] {
        let o = ht_opt(&[
            "gradcheck",
            "--family",
            family,
            "--samples",
            "50",
            "--seed",
            "7",
        ]);
        assert_eq!(o.status.code(), Some(0), "{family}");
        assert!(stdout(&o).contains("result=pass"));
    }
}

#[test]
fn run_writes_requested_artifacts() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"preset": "fig1a", "iterations": 50}"#,
    );
    let out = dir.path().join("out");
    let o = ht_opt(&[
        "run",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--format",
        "json",
        "--plot",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let line = stdout(&o);
    assert!(
        line.starts_with("name=fig1a-ht tuner=ht records=51 "),
        "{line}"
    );
    assert!(line.contains("hard_diverged=false"));
    for f in ["fig1a-ht.csv", "fig1a-ht.json", "fig1a-ht.svg"] {
        assert!(out.join(f).is_file(), "{f} missing");
    }
}

#[test]
fn strict_run_outside_the_bound_fails() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"preset": "fig1a", "strictness": "strict"}"#,
    );
    let o = ht_opt(&[
        "run",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_config_files_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap().to_owned();
    let truncated = write(dir.path(), "t.json", r#"{"preset": "#);
    let unknown = write(dir.path(), "u.json", r#"{"preset": "fig1a", "colour": 3}"#);
    let preset = write(dir.path(), "p.json", r#"{"preset": "fig9"}"#);
    for cfg in [truncated, unknown, preset, "missing.json".to_owned()] {
        let o = ht_opt(&["run", "--config", &cfg, "--out", &out]);
        assert_eq!(o.status.code(), Some(2), "{cfg}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"preset": "fig1b", "iterations": 10}"#,
    );
    let out = dir.path().join("env-out");
    let o = Command::new(env!("CARGO_BIN_EXE_ht-opt"))
        .args(["run", "--config", &cfg])
        .env("HT_OPT_OUT", &out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(out.join("fig1b-ht.csv").is_file());
}

#[test]
fn compare_picks_the_fastest_and_rejects_mismatched_losses() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().to_str().unwrap().to_owned();
    let ht = write(dir.path(), "ht.json", r#"{"preset": "fig1b"}"#);
    let gd = write(
        dir.path(),
        "gd.json",
        r#"{"preset": "fig1b", "tuner": "normalized-gd"}"#,
    );
    let o = ht_opt(&[
        "compare",
        "--configs",
        &ht,
        &gd,
        "--epsilon",
        "1e-6",
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.lines().last().unwrap().starts_with("winner=fig1b-ht "),
        "{text}"
    );
    assert!(dir.path().join("compare.svg").is_file());

    let other = write(dir.path(), "f3.json", r#"{"preset": "fig3-ht"}"#);
    let o = ht_opt(&["compare", "--configs", &ht, &other, "--out", &out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reproduce_reports_claims() {
    let dir = TempDir::new().unwrap();
    let o = ht_opt(&["reproduce", "fig1a", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("claim=ht-stable holds=true"), "{text}");
    assert!(
        text.contains("claim=baselines-diverged holds=true"),
        "{text}"
    );
    for f in [
        "fig1a-ht.csv",
        "fig1a-normalized-gd.csv",
        "fig1a-nesterov.csv",
        "fig1a.svg",
    ] {
        assert!(dir.path().join(f).is_file(), "{f} missing");
    }
}
