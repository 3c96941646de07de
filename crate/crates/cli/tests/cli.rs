use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hom3lr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hom3lr")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn corpus(dir: &TempDir, file: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(file);
    let mut all = vec!["corpus"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let o = hom3lr(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn statuses(report: &Value) -> Vec<(String, String)> {
    report["sections"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["name"].as_str().unwrap().to_string(), s["status"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn corpus_list_and_bad_names() {
    let o = hom3lr(&["corpus", "--list"]);
    assert_eq!(code(&o), 0);
    let names = String::from_utf8(o.stdout).unwrap();
    assert!(names.lines().any(|l| l == "tprime-split"));
    assert_eq!(names.lines().count(), 8);

    assert_eq!(code(&hom3lr(&["corpus", "no-such-thing"])), 2);
    assert_eq!(code(&hom3lr(&["corpus", "tprime-split", "--window", "0"])), 2);
    assert_eq!(code(&hom3lr(&["corpus", "toy-split", "--variant", "x"])), 2);
}

#[test]
fn corpus_writes_metadata() {
    let o = hom3lr(&["corpus", "d4", "--seed", "5"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["format"], "hom3lr-bundle/1");
    assert_eq!(v["metadata"]["corpus"], "d4");
    assert_eq!(v["metadata"]["seed"], "5");
}

#[test]
fn green_bundle_exits_zero() {
    let dir = TempDir::new().unwrap();
    let toy = corpus(&dir, "toy.json", &["toy-split"]);
    let o = hom3lr(&["check", p(&toy), "--report", "json"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["status"], "pass");
    assert!(statuses(&r).iter().all(|(_, s)| s == "pass" || s == "n/a"));

    let text = hom3lr(&["check", p(&toy), "--suite", "core"]);
    assert_eq!(code(&text), 0);
    assert!(String::from_utf8_lossy(&text.stdout).contains("hom_jacobi"));
}

#[test]
fn weak_only_bundle_is_red_with_witness() {
    let dir = TempDir::new().unwrap();
    let b = corpus(&dir, "jw.json", &["jacobian-weak", "--degree-cap", "2"]);
    let o = hom3lr(&["check", p(&b), "--suite", "rinehart", "--report", "json"]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(r["status"], "fail");
    let checks = r["sections"][0]["checks"].as_array().unwrap();
    let failed = checks.iter().find(|c| c["status"] == "fail").unwrap();
    assert!(failed["name"].as_str().unwrap().starts_with("anchor_linear"));
    assert!(failed["witness"]["args"].is_array());
}

#[test]
fn corrupted_bundle_is_red_not_an_input_error() {
    let dir = TempDir::new().unwrap();
    let toy = corpus(&dir, "toy.json", &["toy-split"]);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&toy).unwrap()).unwrap();
    v["L"]["alpha"][0][2] = "2".into();
    v["flags"] = serde_json::json!({"weak": false, "full": false, "regular": false});
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let o = hom3lr(&["check", p(&bad), "--suite", "core", "--report", "json"]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    let checks = r["sections"][0]["checks"].as_array().unwrap();
    let mult = checks.iter().find(|c| c["name"] == "multiplicative").unwrap();
    assert_eq!(mult["status"], "fail");
    assert!(!mult["witness"]["residual"].as_str().unwrap().is_empty());

    // Claiming a flag the data does not support is rejected on load.
    v["flags"]["weak"] = true.into();
    fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let o = hom3lr(&["check", p(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("weak"));
}

#[test]
fn unreadable_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let garbage = dir.path().join("garbage.json");
    fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(code(&hom3lr(&["check", p(&garbage)])), 2);
    assert_eq!(code(&hom3lr(&["check", p(&dir.path().join("missing.json"))])), 2);

    let toy = corpus(&dir, "toy.json", &["toy-split"]);
    let text = fs::read_to_string(&toy).unwrap().replacen("\"1\"", "\"1/x\"", 1);
    let bad = dir.path().join("rational.json");
    fs::write(&bad, text).unwrap();
    let o = hom3lr(&["check", p(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(!o.stderr.is_empty());

    assert_eq!(code(&hom3lr(&["check", p(&toy), "--suite", "nonsense"])), 2);
}

#[test]
fn decompose_and_connect() {
    let dir = TempDir::new().unwrap();
    let core = corpus(&dir, "core.json", &["tprime-split", "--variant", "core", "--window", "1"]);
    let o = hom3lr(&["decompose", p(&core), "--report", "json"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["roots"].as_array().unwrap().len(), 2);
    assert_eq!(r["direct_sum"]["direct_sum"], true);

    let text = hom3lr(&["decompose", p(&core)]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("decomposition = true"));

    let o = hom3lr(&["connect", p(&core), "--from", "0", "--to", "1", "--report", "json"]);
    assert_eq!(code(&o), 0);
    let c = json(&o);
    assert_eq!(c["connected"], true);
    assert_eq!(c["chain_verified"], true);
    assert_eq!(c["literal_search_agrees"], true);

    assert_eq!(code(&hom3lr(&["connect", p(&core), "--from", "0", "--to", "9"])), 2);
    assert_eq!(code(&hom3lr(&["connect", p(&core)])), 0);
}

#[test]
fn decompose_with_supplied_cartan_and_classes() {
    let dir = TempDir::new().unwrap();
    let toy = corpus(&dir, "toy.json", &["toy-split"]);
    let h = dir.path().join("h.json");
    fs::write(&h, r#"[[[0, "1"]], [[1, "1"]]]"#).unwrap();
    let o = hom3lr(&["decompose", p(&toy), "--H", p(&h), "--report", "json"]);
    assert!(code(&o) <= 1);
    assert_eq!(json(&o)["h"], serde_json::json!(["h1", "h2"]));

    let classes = dir.path().join("classes.json");
    fs::write(&classes, "[[0, 1]]").unwrap();
    assert_eq!(code(&hom3lr(&["decompose", p(&toy), "--classes", p(&classes)])), 2);

    let non_abelian = dir.path().join("bad_h.json");
    fs::write(&non_abelian, r#"[[[0, "1"]], [[1, "1"]], [[2, "1"]]]"#).unwrap();
    assert_eq!(code(&hom3lr(&["decompose", p(&toy), "--H", p(&non_abelian)])), 2);
}

#[test]
fn twist_and_tensor_round_trip() {
    let dir = TempDir::new().unwrap();
    let tb = corpus(&dir, "tb.json", &["tb-rinehart", "--degree-cap", "1"]);
    let twisted = dir.path().join("twisted.json");
    let o = hom3lr(&["construct", "twist", p(&tb), "--alpha", "-id", "-o", p(&twisted)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&twisted).unwrap()).unwrap();
    assert_eq!(v["flags"]["full"], true);
    assert_eq!(v["L"]["alpha"][0][2], "-1");
    assert_eq!(code(&hom3lr(&["check", p(&twisted), "--suite", "rinehart"])), 0);

    // A twisted input is refused.
    assert_eq!(code(&hom3lr(&["construct", "twist", p(&twisted), "--alpha", "id"])), 2);
    assert_eq!(code(&hom3lr(&["construct", "twist", p(&tb), "--alpha", "diag:1,2"])), 2);

    let d4 = corpus(&dir, "d4.json", &["d4", "--seed", "3"]);
    let tensor = dir.path().join("tensor.json");
    let o = hom3lr(&["construct", "tensor", p(&d4), "-o", p(&tensor)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&tensor).unwrap()).unwrap();
    let a_dim = v["A"]["dim"].as_u64().unwrap();
    assert_eq!(v["L"]["dim"].as_u64().unwrap(), 4 * a_dim);
    let o = hom3lr(&["check", p(&tensor), "--suite", "identities", "--report", "json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["status"], "pass");
}

#[test]
fn check_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let d4 = corpus(&dir, "d4.json", &["d4", "--seed", "7"]);
    let run = || hom3lr(&["check", p(&d4), "--seed", "11", "--report", "json"]).stdout;
    assert_eq!(run(), run());
}
