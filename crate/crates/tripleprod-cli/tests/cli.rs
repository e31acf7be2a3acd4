use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn tripleprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tripleprod")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tripleprod-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn passing_checks_exit_zero_and_write_both_files() {
    let prefix = scratch("lz");
    let out = tripleprod(&["localzeta", "--random", "4", "--out", prefix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let jsonl = fs::read_to_string(prefix.with_extension("jsonl")).unwrap();
    let csv = fs::read_to_string(prefix.with_extension("csv")).unwrap();
    assert_eq!(jsonl.lines().count(), 4);
    assert!(csv.starts_with("identity_id,inputs,lhs,rhs,rel_disc,pass\n"));
    assert_eq!(csv.lines().filter(|l| l.ends_with(",true")).count(), 4);
}

#[test]
fn report_recomputes_verdicts() {
    let prefix = scratch("arch");
    let out = tripleprod(&["arch", "boundary", "--s", "1.5", "--out", prefix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let path = prefix.with_extension("jsonl");
    assert_eq!(tripleprod(&["report", path.to_str().unwrap()]).status.code(), Some(0));

    // move the left side away; the stored verdict no longer matches
    let line = fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    v["lhs"][0] = serde_json::json!(3.0);
    v["relative_discrepancy"] = serde_json::json!(1.0 / 3.0);
    let tampered = scratch("tampered.jsonl");
    fs::write(&tampered, v.to_string()).unwrap();
    let out = tripleprod(&["report", tampered.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("recomputed false"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(tripleprod(&["watson"]).status.code(), Some(2));
    assert_eq!(tripleprod(&["arch", "gross-kudla", "--weights", "12,8,2", "--s", "0"]).status.code(), Some(2));
}

#[test]
fn config_file_supplies_defaults_and_precision_is_capped() {
    let cfg = scratch("run.cfg");
    fs::write(&cfg, "# defaults\nprecision_digits = 40\neps = 1e-9\n").unwrap();
    let out = tripleprod(&["--config", cfg.to_str().unwrap(), "arch", "kk0", "--k", "12", "--s3", "0,0.3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capped at 15"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"precision_digits\":\"15\""));

    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(tripleprod(&["--config", cfg.to_str().unwrap(), "arch", "boundary", "--s", "1.5"]).status.code(), Some(2));
}
