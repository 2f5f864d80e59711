//! End-to-end checks of the `y3` binary.

use serde_json::Value;
use std::process::{Command, Output};

fn y3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_y3")).args(args).output().unwrap()
}

fn y3_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_y3"))
        .env("Y3_THREADS", threads)
        .args(args)
        .output()
        .unwrap()
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("not JSON: {l}: {e}")))
        .collect()
}

fn summary(recs: &[Value]) -> &Value {
    let last = recs.last().expect("no output");
    assert_eq!(last["record"], "summary");
    last
}

#[test]
fn rejects_non_prime_power() {
    let out = y3(&["verify", "--q", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a prime power"));
}

#[test]
fn rejects_q_not_one_mod_three() {
    for q in ["5", "9", "1"] {
        assert_eq!(y3(&["ctx", "--q", q]).status.code(), Some(2), "q = {q}");
    }
}

#[test]
fn ctx_constants() {
    let out = y3(&["--json", "ctx", "--q", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert_eq!(recs[0]["genus"], 7);
    assert_eq!(recs[0]["M"], 16);
    assert_eq!(recs[0]["rational_places"], 148);
    assert_eq!(summary(&recs)["status"], "PASS");
}

#[test]
fn places_are_well_formed() {
    let out = y3(&["--json", "places", "--q", "7"]);
    let recs = records(&out);
    let places = &recs[..recs.len() - 1];
    assert_eq!(places.len(), 148);
    for p in places {
        for key in ["variant", "a", "b", "field", "alpha", "rationality_class"] {
            assert!(p.get(key).is_some(), "missing {key} in {p}");
        }
    }
    summary(&recs);
}

#[test]
fn semigroup_report_shape() {
    let places = records(&y3(&["--json", "places", "--q", "7"]));
    let affine = places.iter().find(|p| p["variant"] == "affine").unwrap().to_string();
    let out = y3(&["--json", "semigroup", "--q", "7", "--place", &affine]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let r = &recs[0];
    for key in ["place", "class", "i", "K", "gaps", "genus", "symmetric", "certificate", "status"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
    assert_eq!(r["genus"], 7);
    assert_eq!(r["gaps"].as_array().unwrap().len(), 7);
    assert_eq!(r["status"], "PASS");
}

#[test]
fn element_literal_input() {
    let out = y3(&["--json", "orders", "--q", "7", "--alpha", "[3,5] @ 7^2 : [1,0,1]"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let bad = y3(&["--json", "orders", "--q", "7", "--alpha", "[3,5] @ 7^2 : [1,1,1]"]);
    assert_ne!(bad.status.code(), Some(0));
}

#[test]
fn rational_suite_passes_every_place() {
    let out = y3(&["--json", "verify", "--q", "7", "--suite", "rational-semigroups"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let s = summary(&recs);
    assert_eq!(s["rational_places"]["total"], 148);
    assert_eq!(s["rational_places"]["pass"], 148);
    assert_eq!(s["failed"], 0);
}

#[test]
fn aut_suite_reports_the_twisted_relation() {
    let out = y3(&["--json", "verify", "--q", "7", "--suite", "aut"]);
    assert_eq!(out.status.code(), Some(1));
    let recs = records(&out);
    let s = summary(&recs);
    assert_eq!(s["status"], "FAIL");
    let group = recs.iter().find(|r| r["check"] == "group").unwrap();
    assert_eq!(group["detail"]["conjugation_exponent"], 9);
    assert_eq!(group["detail"]["dihedral_relation"], false);
}

#[test]
fn verify_is_deterministic_across_thread_counts() {
    let args = ["--json", "verify", "--q", "4"];
    let a = y3_threads("1", &args);
    let b = y3_threads("4", &args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
    let recs = records(&a);
    let s = summary(&recs);
    assert_eq!(s["seed"], 0x5933_0001u64);
    assert!(s["checks"].as_u64().unwrap() > 0);
}

#[test]
fn csv_output() {
    let out = y3(&["--csv", "verify", "--q", "4", "--suite", "census"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("status,suite,check,subject"));
    assert!(lines.all(|l| l.starts_with("PASS,") || l.starts_with("FAIL,") || l.starts_with("summary")));
}

#[test]
fn json_and_csv_conflict() {
    assert_eq!(y3(&["--json", "--csv", "verify", "--q", "4"]).status.code(), Some(2));
}
