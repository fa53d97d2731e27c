use std::path::PathBuf;
use std::process::{Command, Output};

fn groupwl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groupwl"))
        .args(args)
        .env_remove("GROUPWL_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("groupwl-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn validate_good_and_bad_tables() {
    let good = scratch("z3.txt", "# Z3\n3\n0 1 2\n1 2 0\n2 0 1\n");
    let out = groupwl(&["validate", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "VALID order=3\n");

    let bad = scratch("bad.txt", "3\n0 1 2\n1 2 0\n2 1 0\n");
    let out = groupwl(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).starts_with("INVALID"));

    let out = groupwl(&["validate", "/nonexistent/table.txt"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn emitted_tables_validate() {
    let out = groupwl(&["catalog", "--emit", "Q8"]);
    assert!(out.status.success());
    let file = scratch("q8.txt", &stdout(&out));
    let out = groupwl(&["validate", file.to_str().unwrap()]);
    assert_eq!(stdout(&out), "VALID order=8\n");

    let listing = stdout(&groupwl(&["catalog", "--format", "kv"]));
    assert!(listing.lines().any(|l| l == "group.A5=60"));
}

#[test]
fn wl_verdicts() {
    let out = groupwl(&["wl", "Z4", "Z2xZ2", "--k", "2", "--q", "2", "--version", "I"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("DISTINGUISHED at round 1"));

    let out = groupwl(&["wl", "S3", "S3", "--k", "2", "--version", "II", "--format", "kv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("distinguished=false"));

    let out = groupwl(&["wl", "A5", "A5", "--k", "3"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn game_verdict_and_certificate() {
    let out = groupwl(&[
        "game", "Z4", "Z2xZ2", "--k", "2", "--r", "2", "--q", "2", "--version", "I", "--certificate",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("SPOILER WINS within 2 rounds"));
    assert!(text.contains("minimal rounds: 1"));
    assert!(text.contains("lift "));

    let out = groupwl(&["game", "S3", "S3", "--r", "2", "--inverse-pruning", "--format", "kv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("spoiler_wins=false"));

    let out = groupwl(&["game", "Z8", "Q8", "--r", "1"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn analyze_by_name() {
    let out = groupwl(&["analyze", "A5", "--format", "kv"]);
    assert_eq!(
        stdout(&out),
        "order=60\nsemisimple=true\nrad=1\nsoc=60\nfactors=[60]\npker=60\n"
    );
    let out = groupwl(&["analyze", "no-such-group"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn check_equivalence_small_grid() {
    let one = groupwl(&["--threads", "1", "check-equivalence", "--max-order", "4", "--samples", "5", "--format", "kv"]);
    assert_eq!(one.status.code(), Some(0));
    let many = Command::new(env!("CARGO_BIN_EXE_groupwl"))
        .args(["check-equivalence", "--max-order", "4", "--samples", "5", "--format", "kv"])
        .env("GROUPWL_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(groupwl(&["wl", "Z4"]).status.code(), Some(2));
    assert_eq!(groupwl(&["wl", "Z4", "Z4", "--r", "soon"]).status.code(), Some(2));
    let help = stdout(&groupwl(&["--help"]));
    assert!(help.contains("Exit codes"));
}
