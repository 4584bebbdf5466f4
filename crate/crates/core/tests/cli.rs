use std::process::{Command, Output};

use serde_json::Value;

fn cyclic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclic")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("report on stdout")
}

#[test]
fn genus_run_agrees() {
    let o = cyclic(&["genus", "--t", "5", "--p", "7", "--c", "3", "--method", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json(&o)["result"];
    assert_eq!(r["genus_hurwitz"], 24);
    assert_eq!(r["genus_delta"], 24);
    assert_eq!(r["agreement"], true);
}

#[test]
fn lemmas_pass_for_t4() {
    let o = cyclic(&["curve", "--t", "4", "--p", "5", "--c", "1", "--check", "lemmas"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn input_errors_exit_1() {
    assert_eq!(cyclic(&["arc", "--q", "2", "--k", "5"]).status.code(), Some(1));
    assert_eq!(cyclic(&["arc", "--q", "6", "--k", "3"]).status.code(), Some(1));
    assert_eq!(cyclic(&["genus", "--t", "3"]).status.code(), Some(1));
    assert_eq!(cyclic(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cyclic(&["genus", "--t", "4", "--p", "7", "--c", "1"]).status.code(), Some(1));
}

#[test]
fn failed_check_exits_2() {
    // e1 != e2 breaks the single-eps coefficient symmetry
    let o = cyclic(&["curve", "--t", "4", "--p", "7", "--c", "1", "--eps1", "2", "--eps2", "4", "--check", "lemmas"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["status"], "disagreement");
}

#[test]
fn negative_c_is_accepted() {
    let o = cyclic(&["curve", "--t", "4", "--p", "11", "--c", "-2", "--check", "eta"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["curve"]["c"], "9");
}

#[test]
fn persisted_config_reproduces_report() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let a_s = a.to_str().unwrap();
    let b_s = b.to_str().unwrap();
    let o = cyclic(&["--seed", "9", "--out", a_s, "genus", "--t", "4", "--p", "11", "--c", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let o = cyclic(&["run", "--config", a_s, "--out", b_s]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn enumerate_and_fields() {
    let o = cyclic(&["enumerate", "--q-hi", "10"]);
    assert_eq!(json(&o)["result"]["cyclic"], Value::Array(vec![]));
    let o = cyclic(&["fields", "--field", "3^2/2,2,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["result"]["singer_order"], 91);
}
