//! Runs the `chevalley` binary on small problem files.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chevalley"))
}

fn problem_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("chevalley-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.problem"));
    fs::write(&path, body).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_prints_the_image() {
    let f = problem_file("hyp", "[problem]\nbase = b\nfiber = x\n[ideal]\nb*x - 1\n");
    let out = bin().arg("solve").arg(&f).arg("--oracle").output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("hyp: Spec B \\ V(b)"), "{text}");
    assert!(text.contains("10007"), "{text}");
}

#[test]
fn solve_json_and_stats() {
    let f = problem_file("line", "[problem]\nbase = b\nfiber = x\n[ideal]\nb - x^2\n");
    let out = bin().args(["solve", "--json", "--stats", "text", "--iteration", "linear"]).arg(&f).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["text"], "Spec B");
    assert_eq!(v["stats"]["totals"]["lca_calls"], 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("lca"));
}

#[test]
fn print_round_trips_through_json() {
    let f = problem_file("rt", "[problem]\nmode = map\nbase = b1, b2\nfiber = t\n[map]\nb1 = t\nb2 = t^2\n");
    let out = bin().args(["print", "--json"]).arg(&f).output().unwrap();
    assert!(out.status.success());
    let json = problem_file("rt_json", &stdout(&out));
    let again = bin().arg("print").arg(&json).output().unwrap();
    assert!(stdout(&again).contains("b2 = t^2"), "{}", stdout(&again));
}

#[test]
fn bad_input_exits_with_parse_code() {
    let f = problem_file("bad", "[problem]\nbase = b\nfiber = x\n[ideal]\nb*y - 1\n");
    let out = bin().arg("solve").arg(&f).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error ["));
}

#[test]
fn corpus_subset_passes() {
    let out = bin().args(["corpus", "--only", "hyperbola", "--oracle"]).output().unwrap();
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("2 passed, 0 failed"), "{}", stdout(&out));
}
