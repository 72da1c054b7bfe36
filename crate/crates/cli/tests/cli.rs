use std::fs;
use std::process::{Command, Output};

fn toroidal(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_toroidal"));
    c.args(args);
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("TOROIDAL_")) {
        c.env_remove(k);
    }
    for (k, v) in envs {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn summary(out: &Output) -> serde_json::Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let last = text.lines().last().expect("summary line");
    serde_json::from_str::<serde_json::Value>(last).unwrap()["summary"].clone()
}

#[test]
fn verify_all_l1_exits_zero() {
    let out = toroidal(&["verify", "all", "--preset", "l1"], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(&out);
    assert_eq!(s["totals"]["failed"], 0);
    assert!(s["totals"]["checked"].as_u64().unwrap() > 1000);
    assert!(String::from_utf8_lossy(&out.stderr).contains("checked"));
}

#[test]
fn negative_control_hecke_fails() {
    let out = toroidal(&["verify", "hecke", "--preset", "poly", "--probes", "8", "--negative-control"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let s = summary(&out);
    assert!(s["totals"]["failed"].as_u64().unwrap() > 0);
}

#[test]
fn negative_control_toroidal_fails() {
    let out = toroidal(&["verify", "toroidal", "--preset", "l1", "--probes", "4", "--negative-control"], &[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn long_tensor_is_config_error() {
    let out = toroidal(&["verify", "duality", "--preset", "poly", "--n", "3"], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("l + 1 < n"));
    assert!(out.stdout.is_empty());
}

#[test]
fn wrong_x_in_config_file_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.toml");
    fs::write(&path, "preset = \"poly\"\n[params]\nx = \"2\"\n").unwrap();
    let out = toroidal(&["verify", "duality", "--config", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x = d^(-n-1) q^(n+1)"));
}

#[test]
fn precedence_flag_over_env_over_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.toml");
    fs::write(&path, "preset = \"l1\"\n[sweep]\nprobes = 2\nmodes = 1\n").unwrap();
    let p = path.to_str().unwrap();
    let probes = |out: &Output| summary(out)["config"]["sweep"]["probes"].as_u64().unwrap();
    let modes = |out: &Output| summary(out)["config"]["sweep"]["modes"].as_u64().unwrap();

    let out = toroidal(&["verify", "hecke", "--config", p], &[]);
    assert_eq!((probes(&out), modes(&out)), (2, 1));
    let out = toroidal(&["verify", "hecke", "--config", p], &[("TOROIDAL_PROBES", "3")]);
    assert_eq!((probes(&out), modes(&out)), (3, 1));
    let out = toroidal(&["verify", "hecke", "--config", p, "--probes", "4"], &[("TOROIDAL_PROBES", "3")]);
    assert_eq!((probes(&out), modes(&out)), (4, 1));
    let out = toroidal(&["verify", "hecke"], &[("TOROIDAL_CONFIG", p)]);
    assert_eq!(probes(&out), 2);
}

#[test]
fn skipped_checks_give_warning_exit() {
    let out = toroidal(&["verify", "toroidal", "--preset", "poly", "--window", "2", "--probes", "3", "--modes", "1"], &[]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let s = summary(&out);
    assert_eq!(s["totals"]["failed"], 0);
    assert!(s["totals"]["skipped"].as_u64().unwrap() > 0);
}

#[test]
fn out_file_and_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let out = toroidal(&["verify", "duality", "--preset", "l1", "--probes", "3", "--out", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let original = fs::read(&path).unwrap();

    let json = toroidal(&["report", "json", path.to_str().unwrap()], &[]);
    assert_eq!(json.status.code(), Some(0));
    assert_eq!(json.stdout, original);

    let table = toroidal(&["report", "table", path.to_str().unwrap()], &[]);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.starts_with("relation"));
    assert!(text.contains("psi.conjugate"));
}

#[test]
fn report_table_of_empty_input_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.jsonl");
    fs::write(&path, "").unwrap();
    let out = toroidal(&["report", "table", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn malformed_report_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.jsonl");
    fs::write(&path, "not json\n").unwrap();
    let out = toroidal(&["report", "json", path.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn output_is_identical_across_thread_counts() {
    let a = toroidal(&["verify", "all", "--preset", "l1", "--probes", "6", "--threads", "1"], &[]);
    let b = toroidal(&["verify", "all", "--preset", "l1", "--probes", "6", "--threads", "4"], &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
