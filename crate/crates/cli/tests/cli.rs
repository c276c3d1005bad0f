//! End-to-end runs of the `rpg` binary.

use std::path::Path;
use std::process::{Command, Output};

fn rpg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpg")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&rpg(&["verify", "--q", "6"])), 1);
    assert_eq!(code(&rpg(&["verify", "--q", "3"])), 2);
    assert_eq!(code(&rpg(&["census", "--q", "8"])), 1);
    assert_eq!(code(&rpg(&["census"])), 1);
    assert_eq!(code(&rpg(&["no-such-command"])), 1);
    assert_eq!(code(&rpg(&["census", "--q", "3", "--format", "xml"])), 1);
    assert_eq!(code(&rpg(&["--help"])), 0);
}

#[test]
fn census_json_for_two() {
    let o = rpg(&["census", "--q", "2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"], 167);
    assert_eq!(v["components"], 57);
    assert!(v["pivot_component"].is_null());
}

#[test]
fn gl_census_for_three() {
    let o = rpg(&["census", "--q", "3", "--graph", "gl", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["graph"], "gl");
    assert_eq!(v["vertices"], 11230);
}

#[test]
fn verify_three_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v3.json");
    let o = rpg(&["verify", "--q", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["verdict"], "discrepancy");
    assert_eq!(v["observed_components"], 457);
    assert!(v["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("144")));
}

#[test]
fn thread_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    rpg(&["verify", "--q", "3", "--threads", "1", "--out", a.to_str().unwrap()]);
    rpg(&["verify", "--q", "3", "--threads", "8", "--out", b.to_str().unwrap()]);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn witness_cases() {
    let o = rpg(&["witness", "--q", "3", "--case", "lower-bound"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["distance"], 11);
    assert_eq!(v["equals_main_diameter"], true);

    let o = rpg(&["witness", "--q", "5", "--case", "factorize", "--trials", "1000"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], 1000);

    let o = rpg(&["witness", "--q", "4", "--case", "roots", "--trials", "50"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["passed"].as_u64(), v["graph_checked"].as_bool()), (Some(50), Some(true)));

    let o = rpg(&["witness", "--q", "7", "--case", "pivot-path"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["algebra"]["valid"], true);

    assert_eq!(code(&rpg(&["witness", "--q", "5", "--case", "pivot-path"])), 1);
    assert_eq!(code(&rpg(&["witness", "--q", "5"])), 1);
}

#[test]
fn exports() {
    let o = rpg(&["export", "--q", "2", "--format", "dot"]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert!(dot.starts_with("graph "));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 167);
    assert_eq!(dot.lines().filter(|l| l.contains(" -- ")).count(), 211);

    let o = rpg(&["export", "--q", "3", "--format", "csv", "--component", "pivot"]);
    assert_eq!(code(&o), 0);
    let csv = stdout(&o);
    let mut ids = std::collections::BTreeSet::new();
    for line in csv.lines().skip(1) {
        let mut it = line.split(',');
        ids.insert(it.next().unwrap().to_string());
        ids.insert(it.next().unwrap().to_string());
    }
    assert_eq!(ids.len(), 3263);

    let o = rpg(&["export", "--q", "5", "--format", "dot"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
    assert_eq!(code(&rpg(&["export", "--q", "3", "--component", "999999"])), 1);
}

#[test]
fn field_table_for_nine() {
    let o = rpg(&["field-table", "--q", "9", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["modulus"], "t^2 + 1");
    let elements = v["elements"].as_array().unwrap();
    assert_eq!(elements.len(), 9);
    assert_eq!(elements.iter().filter(|e| e["order"] == 8).count(), 4);
}

fn census_text(cache: &Path) -> String {
    let o = rpg(&["census", "--q", "3", "--cache-dir", cache.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    stdout(&o)
}

#[test]
fn cache_round_trip_and_info() {
    let dir = tempfile::tempdir().unwrap();
    let first = census_text(dir.path());
    let second = census_text(dir.path());
    assert_eq!(first, second);
    let o = rpg(&["cache-info", "--cache-dir", dir.path().to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let files = v.as_array().unwrap();
    assert_eq!(files.len(), 2);
    assert!(files.iter().all(|f| f["length_ok"] == true && f["vertices"] == 5615));

    let graph = dir.path().join("pgl-q3.graph");
    let bytes = std::fs::read(&graph).unwrap();
    std::fs::write(&graph, &bytes[..bytes.len() / 2]).unwrap();
    let o = rpg(&["census", "--q", "3", "--cache-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("corrupt"));
}

#[test]
fn memory_budget_is_enforced() {
    let o = rpg(&["census", "--q", "7", "--mem-budget", "1M"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}
