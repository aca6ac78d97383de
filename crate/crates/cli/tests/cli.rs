use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn aont(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aont")).args(args).output().expect("spawn aont")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = aont(&all);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", stdout(&o)))
}

fn write_catalog_matrix(dir: &Path, name: &str) -> String {
    let o = aont(&["catalog", "--name", name]);
    assert_eq!(o.status.code(), Some(0));
    let path = dir.join(format!("{name}.txt"));
    std::fs::write(&path, &o.stdout).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn verify_catalog_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_catalog_matrix(dir.path(), "A263");
    let o = aont(&["verify", "--matrix", &m, "--ti", "2", "--to", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("pass"));
    let par = aont(&["verify", "--matrix", &m, "--ti", "2", "--to", "6", "--parallel"]);
    assert_eq!(par.status.code(), Some(0));

    // A263 is not a (3,6) transform over GF(3)
    let o = aont(&["verify", "--matrix", &m, "--ti", "3", "--to", "6"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&["verify", "--matrix", &m, "--ti", "3", "--to", "6"]);
    assert_eq!(v["report"]["verdict"], "fail");
    assert_eq!(v["report"]["witness"]["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["report"]["witness"]["cols"].as_array().unwrap().len(), 3);
}

#[test]
fn missing_or_garbled_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_catalog_matrix(dir.path(), "E232");
    assert_eq!(aont(&["transform", "--matrix", &m, "--input", "1,0"]).status.code(), Some(2));
    assert_eq!(aont(&["transform", "--matrix", &m, "--input", "1,0,2,0"]).status.code(), Some(2));
    assert_eq!(aont(&["verify", "--matrix", "/nonexistent", "--ti", "1", "--to", "1"]).status.code(), Some(2));
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "2 2 1 0 1\n2 2\n1 0\n").unwrap();
    assert_eq!(aont(&["verify", "--matrix", bad.to_str().unwrap(), "--ti", "1", "--to", "1"]).status.code(), Some(2));
    assert_eq!(aont(&["verify", "--ti", "1"]).status.code(), Some(2));
    assert_eq!(aont(&["construct", "--kind", "even-bastion", "--s", "5"]).status.code(), Some(2));
}

#[test]
fn transform_then_invert_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_catalog_matrix(dir.path(), "A245");
    let x = "1,0,3,2,2,1,0,4,1,3";
    let v = json(&["transform", "--matrix", &m, "--input", x, "--ti", "2", "--to", "4"]);
    let y: Vec<String> = v["output"].as_array().unwrap().iter().map(|e| e.to_string()).collect();
    let back = aont(&["invert", "--matrix", &m, "--input", &y.join(",")]);
    assert_eq!(back.status.code(), Some(0));
    assert_eq!(stdout(&back).trim(), x);
}

#[test]
fn bounds_reports_theorem_and_best() {
    let o = aont(&["bounds", "--ti", "2", "--to", "5", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("theorem upper bound: 10"), "{text}");
    assert!(text.contains("best upper bound: 8"), "{text}");

    let v = json(&["bounds", "--ti", "2", "--to", "3..8", "--q", "2,3"]);
    assert_eq!(v["cells"].as_array().unwrap().len(), 12);
    let t2 = json(&["bounds", "--table", "2"]);
    assert_eq!(t2["rows"].as_array().unwrap().len(), 16);
    let t1 = aont(&["bounds", "--table", "1"]);
    assert!(stdout(&t1).contains("3t_o-5"));
}

#[test]
fn catalog_lists_every_entry() {
    let v = json(&["catalog"]);
    assert_eq!(v["count"], 16);
    let params: Vec<(u64, u64, u64, u64)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let p = &e["params"];
            (p["ti"].as_u64().unwrap(), p["to"].as_u64().unwrap(), p["s"].as_u64().unwrap(), p["q"].as_u64().unwrap())
        })
        .collect();
    assert!(params.contains(&(2, 6, 13, 3)));
    assert!(params.contains(&(2, 3, 4, 2)));
    assert_eq!(aont(&["catalog", "--name", "nope"]).status.code(), Some(2));
}

#[test]
fn construct_writes_a_verifiable_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.txt");
    let out = out.to_str().unwrap();
    let o = aont(&["construct", "--kind", "cauchy", "--s", "4", "--t", "3", "--q", "8", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(aont(&["verify", "--matrix", out, "--ti", "3", "--to", "3"]).status.code(), Some(0));
    let v = json(&["construct", "--kind", "bs", "--s", "7", "--shrink", "1"]);
    assert_eq!(v["params"]["s"], 6);
    assert_eq!(v["params"]["to"], 6);
}

#[test]
fn search_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("found.txt");
    let o = aont(&["search", "--ti", "2", "--to", "4", "--s", "5", "--q", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "found");
    assert_eq!(
        aont(&["verify", "--matrix", out.to_str().unwrap(), "--ti", "2", "--to", "4"]).status.code(),
        Some(0)
    );

    let o = aont(&["search", "--ti", "2", "--to", "4", "--s", "6", "--q", "2", "--no-bound-pruning"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "exhausted");

    let o = aont(&["search", "--ti", "2", "--to", "4", "--s", "7", "--q", "2", "--compute-s"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["frontier"]["exact"], 5);
    assert_eq!(o.status.code(), Some(0));

    let o = aont(&["search", "--ti", "2", "--to", "3", "--s", "4", "--q", "2", "--strategy", "randomized"]);
    assert_eq!(o.status.code(), Some(2), "randomized search without a budget");
}

#[test]
fn array_check_modes() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_catalog_matrix(dir.path(), "E232");
    assert_eq!(aont(&["array-check", "--matrix", &m, "--ti", "2", "--to", "3"]).status.code(), Some(0));
    assert_eq!(aont(&["array-check", "--matrix", &m, "--ti", "3", "--to", "3"]).status.code(), Some(1));
    assert_eq!(aont(&["array-check", "--matrix", &m, "--ti", "3", "--to", "3", "--weak"]).status.code(), Some(1));
    let v = json(&["array-check", "--matrix", &m, "--columns", "x1,x2,y1"]);
    assert_eq!(v["report"]["verdict"], "unbiased");
    assert_eq!(aont(&["array-check", "--matrix", &m, "--columns", "z1"]).status.code(), Some(2));
    assert_eq!(aont(&["array-check", "--matrix", &m]).status.code(), Some(2));
}
