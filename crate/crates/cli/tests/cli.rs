use std::fs;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn nilgenus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilgenus")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

const S: &str = r#"{"type": "2,1,1", "t": {"123": 5, "134": 5, "124": 1}}"#;
const T: &str = r#"{"type": "2,1,1", "t": {"123": 5, "134": 5, "124": 2}}"#;

#[test]
fn equiv_from_files_reports_unit_witness() {
    let dir = tempfile::tempdir().unwrap();
    let (s, t) = (dir.path().join("s.json"), dir.path().join("t.json"));
    fs::write(&s, S).unwrap();
    fs::write(&t, T).unwrap();
    let out = nilgenus(&["equiv", s.to_str().unwrap(), t.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["verdict"], json!(true));
    assert_eq!(v["witnesses"][0]["p"], json!(5));
    assert_eq!(v["witnesses"][0]["w"], json!(3));
    assert_eq!(v["isomorphic"]["verdict"], json!(false));
    assert_eq!(v["caveats"], json!([]));
    assert_eq!(v["parameters"]["s"], serde_json::from_str::<Value>(S).unwrap());
}

#[test]
fn equiv_reports_failing_prime() {
    let t = r#"{"type": "2,1,1", "t": {"123": 5, "134": 5, "124": 0}}"#;
    let v = json_of(&nilgenus(&["equiv", S, t]));
    assert_eq!(v["verdict"], json!(false));
    assert_eq!(v["failing_prime"], json!(5));
}

#[test]
fn prime_override_is_flagged() {
    let v = json_of(&nilgenus(&["equiv", S, T, "--primes", "2,3"]));
    assert_eq!(v["parameters"]["primes"], json!([2, 3]));
    assert!(v["caveats"].as_array().unwrap().iter().any(|c| c.as_str().unwrap().contains("overridden")));
}

#[test]
fn validate_canonical_tuple() {
    let out = nilgenus(&["validate", T, "--canonical"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["valid"], json!(true));
    let out = nilgenus(&["validate", r#"{"type": "2,1,1", "t": {"123": 5, "134": 5, "124": 4}}"#, "--canonical"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["valid"], json!(false));
}

#[test]
fn table_matches_half_primes() {
    let out = nilgenus(&["table", "--type", "2,1,1", "--primes", "3,5,7,11,13"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["verdict"], json!([1, 2, 3, 5, 6]));
}

#[test]
fn genus_lists_members() {
    let v = json_of(&nilgenus(&["genus", r#"{"type": "2,1,1", "t": {"123": 7, "134": 7, "124": 1}}"#]));
    assert_eq!(v["verdict"], json!(3));
    let frees: Vec<_> = v["members"].as_array().unwrap().iter().map(|m| m["t"]["124"].clone()).collect();
    assert_eq!(frees, [json!(1), json!(2), json!(3)]);
}

#[test]
fn canonicalize_reduces_free_entry() {
    let v = json_of(&nilgenus(&["canonicalize", r#"{"type": "2,1,1", "t": {"123": 5, "134": 5, "124": 7}}"#]));
    assert_eq!(v["verdict"]["t"]["124"], json!(2));
    assert_eq!(v["changed"], json!(true));
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn orbits_of_small_rectangle() {
    let input = r#"{"type": "2,1,2", "t": {"123": 2, "134": 2, "235": 4}}"#;
    let v = json_of(&nilgenus(&["orbits", input]));
    assert_eq!(v["orbits"], json!([[[0, 0]], [[0, 1], [1, 1]], [[1, 0]]]));
    let v = json_of(&nilgenus(&["orbits", input, "--prime", "2"]));
    assert_eq!(v["verdict"], json!(3));
}

#[test]
fn invalid_inputs_exit_with_one() {
    let cases: &[&[&str]] = &[
        &["equiv", "{not json"],
        &["equiv", S],
        &["equiv", S, r#"{"type": "2,1,1,1", "t": {"123": 1, "134": 1, "145": 1, "235": 1}}"#],
        &["genus", r#"{"type": "2,2", "t": {}}"#],
        &["genus", r#"{"type": "2,1,1", "t": {"123": 0, "134": 5}}"#],
        &["table", "--type", "3,1,1", "--primes", "3"],
        &["table", "--type", "2,1,1", "--primes", "4"],
        &["validate", "/nonexistent/file.json"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = nilgenus(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty(), "{args:?} gives a diagnostic");
    }
}

#[test]
fn unsupported_type_names_the_constraint() {
    let out = nilgenus(&["genus", r#"{"type": "2,2", "t": {}}"#]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("class <= 2"));
}

#[test]
fn output_is_deterministic() {
    let args = ["genus", r#"{"type": "2,1,1,1", "t": {"123": 2, "134": 2, "145": 2, "235": 2, "125": 1}}"#];
    let a = nilgenus(&args);
    let b = nilgenus(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn text_format_renders_verdict() {
    let out = nilgenus(&["equiv", S, T, "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict: true"));
}

#[test]
fn selfcheck_quick_passes_and_fault_is_caught() {
    let out = nilgenus(&["selfcheck"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let out = nilgenus(&["selfcheck", "--inject-fault"]);
    assert_ne!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["failed_suites"], json!(["decide-211"]));
}
