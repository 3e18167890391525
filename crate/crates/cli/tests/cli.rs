use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qscheme(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qscheme"))
        .args(args)
        .output()
        .expect("run qscheme")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn generate_then_analyze_cross_polytope() {
    let path = scratch("cross5.json");
    let gen = qscheme(&["generate", "--family", "cross", "--n", "5", "-o", path.to_str().unwrap()]);
    assert!(gen.status.success());
    let out = qscheme(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["size"], 10);
    assert_eq!(r["degree"], 2);
    assert_eq!(r["strength"], 3);
    assert_eq!(r["input"]["backend"], "rational");
    assert_eq!(r["scheme"]["multiplicities"], serde_json::json!(["1", "5", "4"]));
    assert_eq!(r["theorems"]["all_passed"], true);
    assert!(r.get("timing").is_none());
}

#[test]
fn csv_input_is_read_as_float_or_exact() {
    let float = scratch("ico.csv");
    let gen = qscheme(&["generate", "--family", "icosahedron", "--format", "csv", "-o", float.to_str().unwrap()]);
    assert!(gen.status.success());
    let r = json(&qscheme(&["analyze", float.to_str().unwrap()]));
    assert_eq!(r["input"]["backend"], "float");
    assert_eq!(r["degree"], 3);
    assert_eq!(r["theorems"]["all_passed"], true);

    let exact = scratch("square.csv");
    std::fs::write(&exact, "# square\n1,0\n-1,0\n0,1\n0,-1\n").unwrap();
    let r = json(&qscheme(&["analyze", exact.to_str().unwrap()]));
    assert_eq!(r["input"]["backend"], "rational");
    assert_eq!(r["size"], 4);
}

#[test]
fn non_antipodal_input_is_a_finding_not_an_error() {
    let path = scratch("simplex3.json");
    assert!(qscheme(&["generate", "--family", "simplex", "--n", "3", "-o", path.to_str().unwrap()])
        .status
        .success());
    let out = qscheme(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["antipodal"], false);
    assert_eq!(r["applicable"], false);
    assert!(!r["warnings"].as_array().unwrap().is_empty());
    assert!(r["error"].is_null());
}

#[test]
fn bad_inputs_exit_with_two() {
    assert_eq!(qscheme(&["generate", "--family", "mub", "--r", "3"]).status.code(), Some(2));
    assert_eq!(qscheme(&["analyze", "/nonexistent/points.json"]).status.code(), Some(2));
    assert_eq!(qscheme(&["params", "--appendix", "1", "--n", "2", "--N", "5"]).status.code(), Some(2));
}

#[test]
fn unnormalized_points_give_an_error_report() {
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"dimension":2,"scalar":"rational","points":[["2","0"],["-2","0"]]}"#).unwrap();
    let out = qscheme(&["analyze", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert!(r["error"]["kind"].is_string());
}

#[test]
fn params_csv_and_json_agree() {
    let j = json(&qscheme(&["params", "--appendix", "2", "--r", "1"]));
    let c = qscheme(&["--format", "csv", "params", "--appendix", "2", "--r", "1"]);
    assert!(c.status.success());
    let text = String::from_utf8(c.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    let entry = j["tables"]["p"][0][2].as_str().expect("string entry");
    assert!(text.lines().any(|l| l == format!("tables.p.0.2,{entry}")), "{text}");
}

#[test]
fn scan_finds_known_candidates() {
    let r = json(&qscheme(&["scan", "--m", "2..4", "--n-max", "20"]));
    let pairs: Vec<(u64, u64)> = r["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["n"].as_u64().unwrap(), c["N"].as_u64().unwrap()))
        .collect();
    assert!(pairs.contains(&(4, 12)));
    assert!(pairs.contains(&(16, 144)));
}
