use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn opspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opspec")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn exit_code_contract() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("ok.ops", "let A = matrix [[0, 1], [0, 0]];\nassert drazin_spectrum(A) == {};\n", 0),
        ("fail.ops", "let D = diag { seq harmonic(1, 1) -> 0 };\nassert drazin_spectrum(D) == {1};\n", 1),
        ("parse.ops", "let D = diag { 0: };\n", 2),
        ("unbound.ops", "print poles(X);\n", 2),
        ("irrational.ops", "let A = matrix [[0, 2], [1, 0]];\nprint poles(A);\n", 3),
        ("empty.ops", "", 0),
    ];
    for (name, body, code) in cases {
        let f = write(&dir, name, body);
        let o = opspec(&["analyze", s(&f)]);
        assert_eq!(o.status.code(), Some(code), "{name}: {}", stderr(&o));
    }
}

#[test]
fn assertion_failure_shows_a_diff() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "d.ops", "let D = diag { seq harmonic(1, 1) -> 0 };\nassert drazin_spectrum(D) == {1};\n");
    let o = opspec(&["analyze", s(&f), "--text"]);
    let out = stdout(&o);
    assert!(out.contains("left:  {0}") && out.contains("right: {1}"), "{out}");
    assert!(stderr(&o).contains("1 assertion(s) failed"));
}

#[test]
fn parse_errors_report_location_and_expectations() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "p.ops", "let A = matrix [[1, 2]]\nprint poles(A);\n");
    let o = opspec(&["analyze", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 2, column 1: expected `;`, found `print`"), "{err}");
}

#[test]
fn json_report_to_file_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "st.ops",
        "let ST = diag { 0: 1, 1: inf };\nlet TS = diag { 1: inf };\nprint poles(ST);\nprint profile(TS);\n",
    );
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = opspec(&["analyze", s(&f), "--json", "--out", s(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
    let ja = std::fs::read(&a).unwrap();
    assert_eq!(ja, std::fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(v["queries"][0]["value"], serde_json::json!([{"point": "0", "order": 1}, {"point": "1", "order": 1}]));
    assert_eq!(v["operators"][1]["name"], "TS");
    assert_eq!(v["operators"][1]["profile"]["drazin_index_at_0"], 0);
}

#[test]
fn tolerance_flag() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.ops", "let A = matrix [[1.0, 0], [0, 1.00001]];\nprint poles(A);\n");
    let loose = stdout(&opspec(&["analyze", s(&f), "--tol", "1e-4"]));
    let tight = stdout(&opspec(&["analyze", s(&f)]));
    assert_eq!(loose.matches("(order 1)").count(), 1, "{loose}");
    assert_eq!(tight.matches("(order 1)").count(), 2, "{tight}");
    let o = opspec(&["analyze", s(&f), "--tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn drazin_subcommand() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "m.txt", "1 1\n0 0\n");
    let o = opspec(&["drazin", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "index: 1\ninverse: matrix [[1, 1], [0, 0]]\n");
    let f = write(&dir, "n.txt", "matrix [[0, 1, 0], [0, 0, 1], [0, 0, 0]]");
    assert_eq!(stdout(&opspec(&["drazin", s(&f)])), "index: 3\ninverse: matrix [[0, 0, 0], [0, 0, 0], [0, 0, 0]]\n");
    let f = write(&dir, "bad.txt", "1 2\n3\n");
    assert_eq!(opspec(&["drazin", s(&f)]).status.code(), Some(2));
}

#[test]
fn verify_runs_suites() {
    let o = opspec(&["verify", "--suite", "T1", "--trials", "20", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "T1: pass (20 trials, 0 failures, 0 errors)\n");

    let o = opspec(&["verify", "--suite", "fixtures", "--trials", "1", "--seed", "0", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["suite"], "FIXTURES");
    assert_eq!(v[0]["status"], "pass");

    let o = opspec(&["verify", "--suite", "all", "--trials", "5", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 11);

    assert_eq!(opspec(&["verify", "--suite", "T4", "--trials", "1", "--seed", "0"]).status.code(), Some(2));
}

#[test]
fn missing_file_is_a_usage_error() {
    assert_eq!(opspec(&["analyze", "/nonexistent/x.ops"]).status.code(), Some(2));
}
