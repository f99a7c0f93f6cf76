use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_instanton"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: &str) -> String {
    let out = run(args, stdin);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("JSON output")
}

#[test]
fn poincare_tilde_has_rank_one_in_class_zero() {
    let datum = ok(&["catalog", "poincare"], "");
    let out = json(&ok(&["compute", "--flavor", "tilde", "--window", "16", "--format", "json"], &datum));
    for k in 0..8 {
        let expected = if k == 0 { 1 } else { 0 };
        assert_eq!(out["groups"][k.to_string()]["free_rank"], expected, "class {}", k);
    }
    let table = ok(&["compute", "--flavor", "tilde", "--window", "16"], &datum);
    let rows: Vec<Vec<&str>> = table.lines().skip(2).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows, vec![vec!["0", "1", "theta"]]);
}

#[test]
fn lens_euler() {
    let datum = ok(&["catalog", "lens", "5", "1"], "");
    assert_eq!(ok(&["euler"], &datum).trim(), "5");
}

#[test]
fn bad_schema_exits_2_with_json_error() {
    let out = run(&["compute", "--flavor", "plus"], r#"{"schema_version": "1", "ring": "Q", "orbit": []}"#);
    assert_eq!(out.status.code(), Some(2));
    let err = json(&String::from_utf8(out.stderr).unwrap());
    assert_eq!(err["error"], "JsonError");
    let out = run(&["validate", "/nonexistent/datum.json"], "");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&String::from_utf8(out.stderr).unwrap())["error"], "IoError");
}

#[test]
fn validation_failures_exit_1() {
    assert_eq!(ok(&["validate"], &ok(&["catalog", "sphere"], "")).trim(), "ok");
    // U_Fl with the wrong grading drop
    let bad = r#"{"schema_version": "1", "ring": "Q",
        "orbits": [{"label": "a", "stab": "irr", "grading": 1}, {"label": "b", "stab": "irr", "grading": 4}],
        "operators": {"u_fl": [["b", "a", "2"]]}}"#;
    let out = run(&["validate"], bad);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(report["violations"][0]["kind"], "DegreeViolation");
    let out = run(&["compute", "--flavor", "tilde"], bad);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["catalog", "--ring", "Z", "sphere"], "").status.code(), Some(1));
}

#[test]
fn catalog_round_trips_and_reverse_is_an_involution() {
    for args in [
        vec!["catalog", "poincare", "--sign", "-1"],
        vec!["catalog", "--ring", "F7", "lens", "8", "3"],
        vec!["catalog", "synthetic", "--seed", "11", "--orbits", "6"],
    ] {
        let datum = ok(&args, "");
        assert_eq!(ok(&["validate"], &datum).trim(), "ok");
        let twice = ok(&["reverse"], &ok(&["reverse"], &datum));
        assert_eq!(json(&twice), json(&datum), "{:?}", args);
    }
}

#[test]
fn poincare_spectral_sequence_dump() {
    let datum = ok(&["catalog", "poincare"], "");
    let out = json(&ok(&["ss", "--flavor", "tilde", "--pages", "6"], &datum));
    let pages = out["pages"].as_array().unwrap();
    let support = |r: usize| -> Vec<(i64, i64)> {
        pages[r - 1]["entries"].as_array().unwrap().iter().map(|e| (e["p"].as_i64().unwrap(), e["q"].as_i64().unwrap())).collect()
    };
    assert_eq!(support(1), vec![(0, 0), (1, 0), (1, 3), (5, 0), (5, 3)]);
    assert_eq!(support(6), vec![(5, 3)]);
    let d4 = &pages[3]["differentials"][0];
    assert_eq!(d4["source"], serde_json::json!([5, 0]));
    assert_eq!(d4["target"], serde_json::json!([1, 3]));
    assert_eq!(d4["matrix"], serde_json::json!([["8"]]));
}
