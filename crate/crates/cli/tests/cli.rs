use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn ordsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = ordsym(args);
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON from {args:?}: {e}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (out.status.code().unwrap(), json)
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn verify_my1_on_upper_triangular_four() {
    let (code, r) = report(&[
        "--builtin",
        "upper-triangular:4",
        "verify-my1",
        "--p",
        "1",
        "--q",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["parameters"]["d"], 4);
    assert_eq!(r["parameters"]["N"], 10);
    assert_eq!(r["actual_index"], 4);
    assert_eq!(r["command"], "verify-my1");
    assert!(r["timing_ms"].is_number());
}

#[test]
fn nil_index_of_strictly_upper_triangular() {
    let (code, r) = report(&["--builtin", "strictly-upper-triangular:3", "nil-index"]);
    assert_eq!(code, 0);
    assert_eq!(r["index"], 3);
    assert_eq!(r["guarantee"], "exact");
}

#[test]
fn brute_force_over_small_field() {
    let (code, r) = report(&[
        "--builtin",
        "strictly-upper-triangular:3",
        "--field",
        "GF:5",
        "nil-index",
        "--brute-force",
    ]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["field"], "GF(5)");
    assert_eq!(r["index"], 3);
}

#[test]
fn sym_poly_counts_monomials() {
    let (code, r) = report(&["sym-poly", "--md", "2,2"]);
    assert_eq!(code, 0);
    assert_eq!(r["monomial_count"], "6");
    assert_eq!(r["terms"].as_array().unwrap().len(), 6);
}

#[test]
fn free_span_dimension() {
    let (code, r) = report(&["span-dim", "--n", "3", "--m", "2"]);
    assert_eq!(code, 0);
    assert_eq!(r["dim"], 4);
}

#[test]
fn rees_integrality_example() {
    let (code, r) = report(&[
        "--builtin",
        "upper-triangular:3",
        "rees-integrality",
        "--rees",
        "1:E11+E12",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["witness"]["n"], 2);
    assert_eq!(r["power_membership"]["least_power"], 2);
    assert_eq!(r["in_xr"], false);
}

#[test]
fn iso_check_passes_on_builtins() {
    for b in [
        "upper-triangular:3",
        "truncated-polynomial:4",
        "exterior-algebra:3",
    ] {
        let (code, r) = report(&["--builtin", b, "iso-check", "--maxdeg", "3"]);
        assert_eq!(code, 0, "{b}");
        assert_eq!(r["passed"], true, "{b}");
    }
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let args = [
        "--builtin",
        "truncated-polynomial:4",
        "--seed",
        "7",
        "alg-bound",
        "--samples",
        "8",
    ];
    let (_, a) = report(&args);
    let (_, b) = report(&args);
    assert_eq!(without_timing(a), without_timing(b));
}

#[test]
fn describe_round_trips_through_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ut3.json");
    let out = ordsym(&["--builtin", "upper-triangular:3", "describe"]);
    assert!(out.status.success());
    fs::write(&path, &out.stdout).unwrap();
    let path = path.to_str().unwrap();

    let (_, from_file) = report(&["--input", path, "gr"]);
    let (_, builtin) = report(&["--builtin", "upper-triangular:3", "gr"]);
    let strip = |v: Value| {
        let mut v = without_timing(v);
        v.as_object_mut().unwrap().remove("input");
        v
    };
    assert_eq!(strip(from_file), strip(builtin));
}

#[test]
fn field_override_applies_to_input_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    fs::write(
        &path,
        r#"{"dim": 1, "unit": [1], "mul": [[1, 1, [[1, 1]]]]}"#,
    )
    .unwrap();
    let (code, r) = report(&[
        "--input",
        path.to_str().unwrap(),
        "--field",
        "GF:5",
        "check-filtration",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["field"], "GF(5)");
}

#[test]
fn broken_structure_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // e1·e1 = e2 but e2·e1 = e1 breaks (e1 e1) e1 = e1 (e1 e1).
    fs::write(
        &path,
        r#"{"dim": 2, "mul": [[1, 1, [[2, 1]]], [2, 1, [[1, 1]]]]}"#,
    )
    .unwrap();
    let (code, r) = report(&["--input", path.to_str().unwrap(), "check-filtration"]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "fail");
    assert_eq!(r["algebra"]["passed"], false);
}

#[test]
fn non_multiplicative_filtration_fails_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // t ∈ F_0 with t·t = t² outside F_0.
    fs::write(
        &path,
        r#"{"dim": 3, "basis": ["1", "t", "t^2"], "unit": [1, 0, 0],
            "mul": [[1, 1, [[1, 1]]], [1, 2, [[2, 1]]], [2, 1, [[2, 1]]], [1, 3, [[3, 1]]],
                    [3, 1, [[3, 1]]], [2, 2, [[3, 1]]]],
            "filtration": [[[1, 0, 0], [0, 1, 0]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]]]}"#,
    )
    .unwrap();
    let (code, r) = report(&["--input", path.to_str().unwrap(), "check-filtration"]);
    assert_eq!(code, 1);
    assert_eq!(r["filtration"]["failure"]["kind"], "multiplicativity");
}

#[test]
fn truncated_file_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cut.json");
    fs::write(&path, "{\n  \"dim\": 2,\n  \"mul\": [[1, 1").unwrap();
    let out = ordsym(&["--input", path.to_str().unwrap(), "gr"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn missing_input_is_an_input_error() {
    let out = ordsym(&["nil-index"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ordsym(&["--input", "/nonexistent/a.json", "gr"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ordsym(&["--builtin", "no-such-algebra:3", "gr"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_arguments_are_input_errors() {
    assert_eq!(ordsym(&["frobnicate"]).status.code(), Some(2));
    let out = ordsym(&[
        "--builtin",
        "upper-triangular:3",
        "verify-my1",
        "--p",
        "3",
        "--q",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = ordsym(&[
        "--builtin",
        "upper-triangular:3",
        "alg-degree",
        "--element",
        "E99",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = ordsym(&[
        "--builtin",
        "upper-triangular:2",
        "--out",
        path.to_str().unwrap(),
        "gr",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["component_dims"], serde_json::json!([2, 1]));
}
