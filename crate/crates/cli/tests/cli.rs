//! End-to-end tests of the `adlv` binary.

use std::collections::BTreeSet;
use std::process::{Command, Output};

use serde_json::Value;

fn adlv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adlv")).args(args).env_remove("ADLV_CACHE_DIR").output().expect("run adlv")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

fn summary(text: &str) -> Value {
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

#[test]
fn pgl2_catalog() {
    let v = json(&adlv(&["classes", "--type", "A", "--rank", "1", "--variant", "adjoint", "--bound", "2"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows.iter().filter(|r| r["basic"] == true).count(), 2);
}

#[test]
fn bound_zero_lists_lambda_g() {
    for (t, r, var, n) in [("C", "2", "adjoint", 2), ("A", "2", "sc", 1), ("A", "2", "adjoint", 3), ("D", "4", "adjoint", 4)] {
        let v = json(&adlv(&["classes", "--type", t, "--rank", r, "--variant", var, "--bound", "0"]));
        assert_eq!(v.as_array().unwrap().len(), n, "{t}{r} {var}");
    }
}

#[test]
fn gl3_catalog_is_distinct() {
    let v = json(&adlv(&["classes", "--type", "GL", "--rank", "3", "--bound", "4"]));
    let rows = v.as_array().unwrap();
    let pairs: BTreeSet<String> = rows.iter().map(|r| format!("{}|{}", r["newton"], r["kappa"])).collect();
    assert_eq!(pairs.len(), rows.len());
    assert!(rows.len() > 10);
}

#[test]
fn query_non_p_alcove_example() {
    let v = json(&adlv(&["query", "--type", "A", "--rank", "2", "--x", "s01210120120", "--class", "nu=[2,0,-2];kappa=0", "--cutoff", "12"]));
    assert_eq!(v["status"], "empty-up-to-cutoff");
    assert_eq!(v["x"], "t[3,1,-4]·s1s2s1");
    assert_eq!(v["x_geq_b"], true);
    assert_eq!(v["proper_p_alcoves"].as_array().unwrap().len(), 0);
}

#[test]
fn query_translation_and_identity() {
    let v = json(&adlv(&["query", "--type", "C", "--rank", "2", "--x", "t[2,1]", "--class", "nu=[2,1];kappa=0"]));
    assert_eq!(v["status"], "nonempty");
    let v = json(&adlv(&["query", "--type", "A", "--rank", "2", "--x", "e"]));
    assert_eq!(v["status"], "nonempty");
    assert_eq!(v["dim"], 0);
    assert_eq!(v["witness_w"], "t[0,0,0]·e");
}

#[test]
fn bad_input_is_a_usage_error() {
    assert_eq!(adlv(&["query", "--type", "A", "--rank", "2", "--x", "q17"]).status.code(), Some(1));
    assert_eq!(adlv(&["query", "--type", "A", "--rank", "2", "--x", "e", "--class", "nu=[1,0];kappa=0"]).status.code(), Some(1));
    assert_eq!(adlv(&["survey", "--type", "A"]).status.code(), Some(1));
    assert_eq!(adlv(&["--help"]).status.code(), Some(0));
}

#[test]
fn survey_c2_trivial_class_agrees() {
    let o = adlv(&["survey", "--type", "C", "--rank", "2", "--max-len", "14", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let s = summary(&stdout(&o));
    assert_eq!(s["shrunken_disagree"], 0);
    assert_eq!(s["shrunken_checked"], 162);
}

#[test]
fn survey_a2_superbasic_agrees_with_palcove_rule() {
    let v = json(&adlv(&["classes", "--type", "A", "--rank", "2", "--variant", "adjoint", "--bound", "0"]));
    let key = v.as_array().unwrap().iter().find(|r| r["kappa"] != "0").unwrap()["key"].as_str().unwrap().to_string();
    let o = adlv(&["survey", "--type", "A", "--rank", "2", "--variant", "adjoint", "--class", &key, "--max-len", "12", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let s = summary(&stdout(&o));
    assert_eq!(s["palcove_disagree"], 0);
    assert!(s["palcove_checked"].as_u64().unwrap() > 100);
}

#[test]
fn survey_is_deterministic_and_cache_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["survey", "--type", "G", "--rank", "2", "--max-len", "7"];
    let plain = stdout(&adlv(&[&base[..], &["--jobs", "1"]].concat()));
    let parallel = stdout(&adlv(&[&base[..], &["--jobs", "3"]].concat()));
    assert_eq!(plain, parallel);
    let d = dir.path().to_str().unwrap();
    let cold = stdout(&adlv(&[&base[..], &["--cache-dir", d]].concat()));
    let warm = stdout(&adlv(&[&base[..], &["--cache-dir", d]].concat()));
    assert_eq!(cold, plain);
    assert_eq!(warm, plain);
    // A damaged cache is repaired, never trusted.
    let p = dir.path().join("cache.jsonl");
    let mut text = std::fs::read_to_string(&p).unwrap();
    text.push_str("garbage\n");
    std::fs::write(&p, text).unwrap();
    assert_eq!(stdout(&adlv(&[&base[..], &["--cache-dir", d]].concat())), plain);
}

#[test]
fn figure_and_survey_agree() {
    let args = ["--type", "C", "--rank", "2", "--max-len", "6"];
    let fig = stdout(&adlv(&[&["figure", "--format", "tsv"][..], &args[..]].concat()));
    let sur = stdout(&adlv(&[&["survey", "--format", "tsv"][..], &args[..]].concat()));
    assert_eq!(fig, sur);
    let svg = stdout(&adlv(&[&["figure"][..], &args[..]].concat()));
    assert_eq!(svg.matches("<polygon").count(), fig.lines().count() - 1);
}

#[test]
fn figure_trivial_and_rejections() {
    let svg = stdout(&adlv(&["figure", "--type", "A", "--rank", "2", "--max-len", "0"]));
    assert_eq!(svg.matches("<polygon").count(), 1);
    assert!(svg.contains("fill=\"#000000\""));
    assert_eq!(adlv(&["figure", "--type", "A", "--rank", "3"]).status.code(), Some(1));
    assert_eq!(adlv(&["figure", "--type", "GL", "--rank", "3"]).status.code(), Some(1));
}

#[test]
fn orbit_table_identity() {
    let v = json(&adlv(&["table", "--type", "C", "--rank", "2", "--x", "s0121"]));
    let e = v["entries"].as_array().unwrap();
    assert_eq!(e.len(), 1);
    assert_eq!(e[0]["dim"], 4);
}
