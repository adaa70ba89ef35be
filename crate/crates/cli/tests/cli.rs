use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use qsyslab::examples::EXAMPLES;

fn qsyslab(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qsyslab"));
    cmd.args(args).env_remove("QSYSLAB_TOL");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn emit(dir: &TempDir, name: &str) -> PathBuf {
    let path = dir.path().join(format!("{name}.json"));
    let o = qsyslab(&["examples", "--emit", name, path.to_str().unwrap()], &[]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    path
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

const UNNORMALIZED: &str = r#"{
  "spaces": [{"name": "M", "dim": 4}],
  "morphisms": [{"name": "two", "dom": ["M"], "cod": ["M"], "matrix": [
    [[2,0],[0,0],[0,0],[0,0]], [[0,0],[2,0],[0,0],[0,0]],
    [[0,0],[0,0],[2,0],[0,0]], [[0,0],[0,0],[0,0],[2,0]]]}],
  "equations": [{"name": "two_is_one", "lhs": "two", "rhs": "id[M]"}],
  "checks": [
    {"kind": "check_equation", "equation": "two_is_one"},
    {"name": "loose", "kind": "check_equation", "equation": "two_is_one", "tol": 1.5}
  ]
}"#;

#[test]
fn list_names_every_example() {
    let o = qsyslab(&["examples", "--list"], &[]);
    assert_eq!(code(&o), 0);
    for (name, _) in EXAMPLES {
        assert!(stdout(&o).contains(name), "{name} missing from the listing");
    }
}

#[test]
fn every_example_verifies() {
    let dir = TempDir::new().unwrap();
    for (name, _) in EXAMPLES {
        let path = emit(&dir, name);
        let o = qsyslab(&["verify", s(&path)], &[]);
        assert_eq!(code(&o), 0, "{name}:\n{}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn unknown_example_exits_2() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.json");
    let o = qsyslab(&["examples", "--emit", "no_such_example", s(&out)], &[]);
    assert_eq!(code(&o), 2);
    assert!(!out.exists());
}

#[test]
fn dangling_name_exits_2_with_its_path() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "dangling.json",
        r#"{"qsystems": [{"kind": "function_algebra", "name": "A", "n": 2}],
            "checks": [{"kind": "verify_qsystem", "qsystem": "B"}]}"#,
    );
    let o = qsyslab(&["verify", s(&path)], &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("checks[0].qsystem"), "{}", stderr(&o));
}

#[test]
fn dangling_space_in_a_wire_exits_2() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "wire.json",
        r#"{"spaces": [{"name": "V", "dim": 1}],
            "morphisms": [{"name": "f", "dom": ["V", "W"], "cod": ["V"], "matrix": [[[1,0]]]}]}"#,
    );
    let o = qsyslab(&["verify", s(&path)], &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("morphisms[0].dom[1]"), "{}", stderr(&o));
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    let unknown_field = write(&dir, "a.json", r#"{"spaces": [{"name": "V", "dim": 2, "colour": 1}]}"#);
    let o = qsyslab(&["verify", s(&unknown_field)], &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("spaces[0]"), "{}", stderr(&o));

    let not_json = write(&dir, "b.json", "{");
    assert_eq!(code(&qsyslab(&["verify", s(&not_json)], &[])), 2);

    let missing = dir.path().join("missing.json");
    assert_eq!(code(&qsyslab(&["verify", s(&missing)], &[])), 2);

    let duplicate = write(
        &dir,
        "c.json",
        r#"{"qsystems": [{"kind": "function_algebra", "name": "A", "n": 2},
                         {"kind": "matrix_algebra", "name": "A", "n": 2}]}"#,
    );
    assert_eq!(code(&qsyslab(&["verify", s(&duplicate)], &[])), 2);
}

#[test]
fn mismatched_equation_sides_exit_2() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "sig.json",
        r#"{"qsystems": [{"kind": "function_algebra", "name": "A", "n": 2}],
            "morphisms": [{"name": "m", "qsystem": "A", "part": "mult"}],
            "equations": [{"name": "bad", "lhs": "m", "rhs": "id[A]"}]}"#,
    );
    let o = qsyslab(&["check-eq", s(&path), "--eq", "bad"], &[]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("equations[0]"), "{}", stderr(&o));
}

#[test]
fn unknown_equation_exits_2() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "fn_alg_2");
    let o = qsyslab(&["check-eq", s(&path), "--eq", "no_such_equation"], &[]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unnormalized_multiplication_is_not_a_coisometry() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "mm_star_vs_id");
    let o = qsyslab(&["check-eq", s(&path), "--eq", "mm_star"], &[]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("residual 1e0"), "{}", stdout(&o));
    let o = qsyslab(&["check-eq", s(&path), "--eq", "associativity"], &[]);
    assert_eq!(code(&o), 0);
}

#[test]
fn axioms_hold_as_equations() {
    let dir = TempDir::new().unwrap();
    for example in ["fn_alg_2", "matrix_alg_2"] {
        let path = emit(&dir, example);
        for eq in ["associativity", "unit_left", "unit_right", "frobenius_left", "separability", "zigzag_right"] {
            let o = qsyslab(&["check-eq", s(&path), "--eq", eq], &[]);
            assert_eq!(code(&o), 0, "{example} {eq}: {}", stdout(&o));
        }
    }
}

#[test]
fn failing_check_exits_1() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "two.json", UNNORMALIZED);
    let report = dir.path().join("r.json");
    let o = qsyslab(&["verify", s(&path), "--report", s(&report)], &[]);
    assert_eq!(code(&o), 1);
    let body = &read_json(&report)["body"];
    assert_eq!(body["passed"], false);
    assert_eq!(body["failed"], 1);
    assert_eq!(body["checks"][0]["residuals"][0]["residual"], 1.0);
    assert_eq!(body["checks"][1]["name"], "loose");
    assert_eq!(body["checks"][1]["passed"], true);
}

#[test]
fn report_body_is_deterministic() {
    let dir = TempDir::new().unwrap();
    for name in ["qbe_selfdual_2", "matrix_alg_2"] {
        let path = emit(&dir, name);
        let (r1, r2) = (dir.path().join("1.json"), dir.path().join("2.json"));
        assert_eq!(code(&qsyslab(&["verify", s(&path), "--report", s(&r1)], &[])), 0);
        assert_eq!(code(&qsyslab(&["verify", s(&path), "--report", s(&r2)], &[])), 0);
        let (a, b) = (read_json(&r1), read_json(&r2));
        assert_eq!(a["body"], b["body"]);
        assert_eq!(a["header"]["tool"], "qsyslab");
    }
}

#[test]
fn report_records_the_split_obstruction() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "nonsplit_c3");
    let report = dir.path().join("r.json");
    assert_eq!(code(&qsyslab(&["verify", s(&path), "--report", s(&report)], &[])), 0);
    let checks = read_json(&report)["body"]["checks"].as_array().unwrap().clone();
    let split = checks.iter().find(|c| c["kind"] == "split_obstruction").unwrap();
    assert_eq!(split["data"]["dim"], 3);
    assert_eq!(split["data"]["is_perfect_square"], false);
}

#[test]
fn report_keeps_declaration_order() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "fn_alg_2");
    let report = dir.path().join("r.json");
    qsyslab(&["verify", s(&path), "--report", s(&report)], &[]);
    let ws = read_json(&path);
    let declared: Vec<&str> = ws["checks"].as_array().unwrap().iter().map(|c| c["kind"].as_str().unwrap()).collect();
    let body = read_json(&report);
    let reported: Vec<&str> = body["body"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["kind"].as_str().unwrap())
        .collect();
    assert_eq!(declared, reported);
}

#[test]
fn tolerance_precedence() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "two.json", UNNORMALIZED);
    let p = s(&path);
    // Default 1e-9 rejects a residual of 1.
    assert_eq!(code(&qsyslab(&["check-eq", p, "--eq", "two_is_one"], &[])), 1);
    // The environment loosens it.
    assert_eq!(code(&qsyslab(&["check-eq", p, "--eq", "two_is_one"], &[("QSYSLAB_TOL", "2")])), 0);
    // An explicit flag beats the environment.
    let o = qsyslab(&["check-eq", p, "--eq", "two_is_one", "--tol", "1e-3"], &[("QSYSLAB_TOL", "2")]);
    assert_eq!(code(&o), 1);
    // A per-check tolerance beats both.
    let report = dir.path().join("r.json");
    qsyslab(&["verify", p, "--tol", "3", "--report", s(&report)], &[]);
    let body = &read_json(&report)["body"];
    assert_eq!(body["tolerance"], 3.0);
    assert_eq!(body["checks"][0]["tolerance"], 3.0);
    assert_eq!(body["checks"][1]["tolerance"], 1.5);
}

#[test]
fn invalid_tolerance_exits_2() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "nonsplit_c3");
    assert_eq!(code(&qsyslab(&["verify", s(&path), "--tol", "-1"], &[])), 2);
    assert_eq!(code(&qsyslab(&["verify", s(&path)], &[("QSYSLAB_TOL", "abc")])), 2);
}

#[test]
fn expected_failures_invert_the_verdict() {
    let dir = TempDir::new().unwrap();
    let mut ws = read_json(&emit(&dir, "mm_star_vs_id"));
    let checks = ws["checks"].as_array_mut().unwrap();
    for c in checks.iter_mut() {
        c.as_object_mut().unwrap().remove("expect");
    }
    let path = write(&dir, "plain.json", &ws.to_string());
    let report = dir.path().join("r.json");
    assert_eq!(code(&qsyslab(&["verify", s(&path), "--report", s(&report)], &[])), 1);
    let body = &read_json(&report)["body"];
    assert_eq!(body["failed"], 2);
}
