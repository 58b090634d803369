// End-to-end runs of the compiled binary: exit codes, output shapes, cache
// and determinism guarantees.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdelta-cli"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn compute_witness_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("witness.txt");
    let out = run(&["compute", "--delta", "5", "--rank", "2", "--witness", path_str(&w)]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).starts_with("g(5,2) = 8\n"), "got: {}", stdout(&out));

    let v = run(&["verify", path_str(&w), "--delta", "5"]);
    assert_eq!(code(&v), 0, "stderr: {}", stderr(&v));
    let text = stdout(&v);
    assert!(text.contains("is_generic: true"));
    assert!(text.contains("is_delta_modular: true"));
    assert!(text.contains("columns_distinct: true"));
}

#[test]
fn h_mode_witness_also_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("hwitness.txt");
    let out = run(&[
        "compute",
        "--delta",
        "2",
        "--rank",
        "2",
        "--mode",
        "nongeneric",
        "--witness",
        path_str(&w),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("h(2,2) = 11\n"), "got: {}", stdout(&out));

    let v = run(&["verify", path_str(&w), "--delta", "2"]);
    assert_eq!(code(&v), 0);
    // the expanded witness has the zero column and ± pairs, so it cannot
    // be generic, but it is Δ-modular with distinct columns
    assert!(stdout(&v).contains("is_generic: false"));
    assert!(stdout(&v).contains("is_delta_modular: true"));
}

#[test]
fn negation_universe_reaches_the_same_value() {
    let plain = run(&["compute", "--delta", "2", "--rank", "2", "--mode", "nongeneric"]);
    let full = run(&[
        "compute",
        "--delta",
        "2",
        "--rank",
        "2",
        "--mode",
        "nongeneric",
        "--allow-negations",
    ]);
    assert_eq!(code(&plain), 0);
    assert_eq!(code(&full), 0);
    let first = |o: &Output| stdout(o).lines().next().unwrap().to_string();
    assert_eq!(first(&plain), "h(2,2) = 11");
    assert_eq!(first(&full), "h(2,2) = 11");
}

#[test]
fn verify_rejects_wrong_delta() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("id.txt");
    fs::write(&f, "2 2\n1 0\n0 1\n").unwrap();
    let v = run(&["verify", path_str(&f), "--delta", "5"]);
    assert_eq!(code(&v), 1);
    assert!(stdout(&v).contains("is_delta_modular: false"));
}

#[test]
fn verify_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("junk.txt");
    fs::write(&f, "this is not a matrix\n").unwrap();
    let v = run(&["verify", path_str(&f), "--delta", "5"]);
    assert_eq!(code(&v), 2, "stderr: {}", stderr(&v));
}

#[test]
fn invalid_parameters() {
    let out = run(&["compute", "--delta", "0", "--rank", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn node_cap_exceeded() {
    let out = run(&["compute", "--delta", "7", "--rank", "2", "--cap", "1"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("cap"), "stderr: {}", stderr(&out));
}

#[test]
fn table_to_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.csv");
    let out = run(&["table", "--rank", "2", "--delta-max", "6", "--csv", path_str(&f)]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = fs::read_to_string(&f).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(
        lines[0],
        "delta,rank,mode,value,lower_bound,upper_linear,upper_sublinear,excess,witness,elapsed_ms"
    );
    assert!(lines[1].starts_with("2,2,generic,4,"));
    assert!(lines[5].starts_with("6,2,generic,8,"));
}

#[test]
fn cache_reuse_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("cache.json");
    let args =
        ["compute", "--delta", "6", "--rank", "2", "--cache", path_str(&c)].map(str::to_string);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let first = run(&args);
    assert_eq!(code(&first), 0);
    let second = run(&args);
    assert_eq!(code(&second), 0);
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stderr(&second).contains("cache hit"));
}

#[test]
fn deterministic_reruns_are_identical() {
    let args = ["compute", "--delta", "9", "--rank", "2"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f2.txt");
    let out = run(&["construct", "--family", "f2", "--delta", "9"]);
    assert_eq!(code(&out), 0);
    fs::write(&f, stdout(&out)).unwrap();
    let v = run(&["verify", path_str(&f), "--delta", "9"]);
    assert_eq!(code(&v), 0, "stdout: {}", stdout(&v));
    assert!(stdout(&v).contains("is_generic: true"));
}

#[test]
fn construct_30s24_parameter_rules() {
    let good = run(&["construct", "--family", "30s24", "--delta", "24"]);
    assert_eq!(code(&good), 0);
    let bad = run(&["construct", "--family", "30s24", "--delta", "25"]);
    assert_eq!(code(&bad), 2);
    let contradictory =
        run(&["construct", "--family", "30s24", "--delta", "54", "--s", "0"]);
    assert_eq!(code(&contradictory), 2);
}

#[test]
fn hnf_count_reduction_levels() {
    let all = run(&["hnf-count", "--delta", "13", "--rank", "4"]);
    assert_eq!(stdout(&all).trim(), "2380");
    let op = run(&["hnf-count", "--delta", "13", "--rank", "4", "--mode", "op"]);
    assert_eq!(stdout(&op).trim(), "84");
    let classes = run(&["hnf-count", "--delta", "13", "--rank", "4", "--mode", "classes"]);
    assert_eq!(stdout(&classes).trim(), "37");
}

#[test]
fn bounds_row_shape() {
    let out = run(&["bounds", "--delta", "7", "--rank", "2"]);
    assert_eq!(code(&out), 0);
    let line = stdout(&out);
    let fields: Vec<&str> = line.trim().split(',').collect();
    assert_eq!(fields.len(), 7, "got: {line}");
    assert_eq!(fields[0], "7");
    assert_eq!(fields[1], "2");
}

#[test]
fn oracle_agrees_with_search() {
    let oracle = run(&["oracle", "--delta", "3", "--rank", "2"]);
    let search = run(&["compute", "--delta", "3", "--rank", "2"]);
    assert_eq!(code(&oracle), 0);
    let first = |o: &Output| stdout(o).lines().next().unwrap().to_string();
    assert_eq!(first(&oracle), first(&search));
    assert_eq!(first(&oracle), "g(3,2) = 6");
}
