use std::process::{Command, Output};

use serde_json::Value;

fn tamecover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamecover")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = tamecover(&all);
    let value = serde_json::from_slice(&out.stdout).expect("json output");
    (out.status.code().unwrap(), value)
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn decide_exit_codes() {
    let (code, v) = json(&["decide", "--p", "7", "--ram", "5,3,3,5"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "EXISTS");
    let (code, v) = json(&["decide", "--p", "5", "--ram", "4,4,4,4,3"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "NOT_EXISTS");
    let (code, _) = json(&["decide", "--p", "6", "--ram", "2,2,2"]);
    assert_eq!(code, 2);
    let out = tamecover(&["decide", "--p", "5", "--ram", "2,x,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "enumerate", "--d", "4", "--ram", "4,2,2,2"];
    let a = tamecover(&args);
    let b = tamecover(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["payload"]["classes"].as_array().unwrap().len(), 4);
}

#[test]
fn enumerate_bound_exit_code() {
    let (code, _) = json(&["enumerate", "--d", "8", "--ram", "8,8,2"]);
    assert_eq!(code, 3);
}

#[test]
fn analyze_example_file() {
    let (code, v) = json(&["analyze", "--p", "5", "--file", &data("s10_example.tuple")]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "NOT_EXISTS");
    let (code, v) = json(&["orbit", "--file", &data("simple_d3.tuple")]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["classes"].as_array().unwrap().len(), 4);
    assert_eq!(v["payload"]["raw_orbit_size"], 24);
}

#[test]
fn construct_round_trips_through_orbit() {
    let (code, v) = json(&["construct", "--p", "7", "--ram", "5,5,5,5,5,3"]);
    assert_eq!(code, 0);
    let d = v["payload"]["verdict"]["degree"].as_u64().unwrap();
    let perms: Vec<String> = v["payload"]["verdict"]["certificate"]["perms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["cycles"].as_str().unwrap().to_string())
        .collect();
    let dir = std::env::temp_dir().join(format!("tamecover-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("built.tuple");
    std::fs::write(&file, format!("d={d}\n{}\n", perms.join("\n"))).unwrap();
    let (code, v) = json(&["analyze", "--p", "7", "--file", file.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["payload"]["genus"], 0);
}

#[test]
fn verify_map_text_and_json() {
    let (code, v) = json(&["verify-map", "--p", "5", "--k", "2", "--num", "x^7+x^5-x"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["riemann_hurwitz"], true);
    let (code, v) = json(&["verify-map", "--p", "3", "--num", "x^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "INSEPARABLE");
}

#[test]
fn self_test_passes() {
    let (code, v) = json(&["self-test"]);
    assert_eq!(code, 0, "{v}");
}
