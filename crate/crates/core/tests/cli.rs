use std::path::PathBuf;
use std::process::{Command, Output};

fn jobs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../jobs")
}

fn weakram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weakram")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("weakram-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn job(name: &str) -> String {
    jobs().join(name).to_string_lossy().into_owned()
}

#[test]
fn construct_prints_a_positive_certificate() {
    let out = weakram(&["construct", "--spec", &job("cyclotomic.ini")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["verdict"], true);
    assert_eq!(cert["group"]["order"], 3);
}

#[test]
fn negative_verdict_exits_two() {
    let out = weakram(&["verify", "--spec", &job("cyclotomic_square.ini")]);
    assert_eq!(out.status.code(), Some(2));
    let cert: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["verdict"], false);
}

#[test]
fn unmet_hypothesis_exits_two() {
    // n = 2 is not congruent to 1 modulo |G_1| = 3
    let dir = scratch("exponent");
    let spec = dir.join("bad_n.ini");
    std::fs::write(&spec, "[base]\nkind = padic\np = 3\n[extension]\npolynomial = x^3 - 3*x + 1\n[task]\nn = 2\n")
        .unwrap();
    let out = weakram(&["construct", "--spec", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_input_exits_three() {
    let dir = scratch("parse");
    let spec = dir.join("broken.ini");
    std::fs::write(&spec, "[base]\nkind = padic\np = three\n").unwrap();
    assert_eq!(weakram(&["analyze", "--spec", spec.to_str().unwrap()]).status.code(), Some(3));
    let missing = dir.join("missing.ini");
    assert_eq!(weakram(&["analyze", "--spec", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn out_file_matches_stdout() {
    let dir = scratch("out");
    let target = dir.join("flagship.json");
    let a = weakram(&["analyze", "--spec", &job("flagship.ini")]);
    let b = weakram(&["analyze", "--spec", &job("flagship.ini"), "--out", target.to_str().unwrap()]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(std::fs::read(&target).unwrap(), a.stdout);
}

#[test]
fn batch_writes_one_certificate_per_job() {
    let out_dir = scratch("batch");
    let out = weakram(&["analyze", "--batch", &jobs().to_string_lossy(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let inis = std::fs::read_dir(jobs())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "ini"));
    let count = inis.count();
    assert_eq!(stdout.lines().count(), count);
    for line in stdout.lines() {
        assert!(line.starts_with("[0] "), "{line}");
    }
    let jsons = std::fs::read_dir(&out_dir).unwrap().count();
    assert_eq!(jsons, count);
}
