use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn rvclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rvclab")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn construct(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let p = dir.join(name);
    let mut all = vec!["construct"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", p.to_str().unwrap()]);
    assert_eq!(code(&rvclab(&all)), 0);
    p
}

#[test]
fn construct_counts() {
    let o = rvclab(&["construct", "--core", "path:3", "--flare", "complete:2", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 7);
    assert_eq!(v["vertices"][3]["label"], "flare:1:1");

    let dot = stdout(&rvclab(&["construct", "--core", "cycle:3", "--flare", "complete:2", "--format", "dot"]));
    assert!(dot.starts_with("graph G {"));
    assert_eq!(dot.lines().filter(|l| l.trim_end().ends_with("\";") && !l.contains("--")).count(), 9);

    let t = rvclab(&["construct", "--core", "tree", "--edges", "1-2,1-3", "--flare", "complete:2"]);
    let v: Value = serde_json::from_str(&stdout(&t)).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 7);
}

#[test]
fn construct_is_deterministic() {
    let args = ["construct", "--core", "complete:4", "--flare", "complete:3"];
    assert_eq!(rvclab(&args).stdout, rvclab(&args).stdout);
}

#[test]
fn construct_usage_errors() {
    assert_eq!(code(&rvclab(&["construct", "--core", "star:3"])), 2);
    assert_eq!(code(&rvclab(&["construct", "--core", "tree"])), 2);
    assert_eq!(code(&rvclab(&["construct", "--core", "path:3", "--format", "csv"])), 2);
    assert_eq!(code(&rvclab(&["construct"])), 2);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = construct(d, "p3.json", &["--core", "path:3", "--flare", "complete:2"]);
    let c = d.join("upper.json");
    assert_eq!(
        code(&rvclab(&["color", "--rule", "upper-general", "--m", "3", "--n", "2", "--out", c.to_str().unwrap()])),
        0
    );
    let ok = rvclab(&["verify", g.to_str().unwrap(), c.to_str().unwrap()]);
    assert_eq!(code(&ok), 0);
    let report: Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(report["rainbow_ok"], true);

    let p4 = construct(d, "p4.json", &["--core", "path:4", "--flare", "complete:2"]);
    let ones: Vec<String> = (0..10).map(|v| format!("\"{v}\":1")).collect();
    let ones = write(d, "ones.json", &format!("{{\"k\":1,\"colors\":{{{}}}}}", ones.join(",")));
    let bad = rvclab(&["verify", p4.to_str().unwrap(), ones.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    let report: Value = serde_json::from_str(&stdout(&bad)).unwrap();
    assert!(!report["failing_pair_rainbow"].is_null());

    let partial: Vec<String> = (0..6).map(|v| format!("\"{v}\":1")).collect();
    let partial = write(d, "partial.json", &format!("{{\"k\":1,\"colors\":{{{}}}}}", partial.join(",")));
    assert_eq!(code(&rvclab(&["verify", g.to_str().unwrap(), partial.to_str().unwrap()])), 2);
    assert_eq!(code(&rvclab(&["verify", g.to_str().unwrap(), "/nonexistent.json"])), 2);
}

#[test]
fn solve_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases = [
        (vec!["--core", "complete:5"], "rvcl", 5),
        (vec!["--core", "cycle:4", "--flare", "complete:2"], "rvcl", 4),
        (vec!["--core", "cycle:3", "--flare", "complete:2"], "rvc", 1),
    ];
    for (i, (spec, target, want)) in cases.into_iter().enumerate() {
        let g = construct(d, &format!("g{i}.json"), &spec);
        let o = rvclab(&["solve", g.to_str().unwrap(), "--target", target]);
        assert_eq!(code(&o), 0);
        let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(r["value"], want);
        assert_eq!(r["status"], "proved");
        assert_eq!(r["witness"]["k"], want);
    }
}

#[test]
fn solve_budget_and_size_cap() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = construct(d, "c5.json", &["--core", "cycle:5", "--flare", "complete:2"]);
    let o = rvclab(&["solve", g.to_str().unwrap(), "--target", "rvcl", "--budget-nodes", "1"]);
    assert_eq!(code(&o), 3);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["status"], "budget-exhausted");

    let big = construct(d, "c6k3.json", &["--core", "cycle:6", "--flare", "complete:3"]);
    assert_eq!(code(&rvclab(&["solve", big.to_str().unwrap(), "--target", "rvcl"])), 2);
    assert_eq!(code(&rvclab(&["solve", g.to_str().unwrap(), "--target", "nope"])), 2);
}

#[test]
fn color_rules() {
    let o = rvclab(&["color", "--rule", "cycle-rvcl", "--m", "5", "--n", "2"]);
    assert_eq!(code(&o), 0);
    let c: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(c["k"], 4);
    assert_eq!(c["colors"].as_object().unwrap().len(), 15);

    let c: Value =
        serde_json::from_str(&stdout(&rvclab(&["color", "--rule", "complete-rvcl", "--m", "3", "--n", "4"]))).unwrap();
    assert_eq!(c["k"], 5);

    let c: Value =
        serde_json::from_str(&stdout(&rvclab(&["color", "--rule", "path-rvcl", "--m", "2", "--n", "2"]))).unwrap();
    assert_eq!(c, serde_json::json!({"k": 4, "colors": {"0": 1, "1": 2, "2": 3, "3": 4}}));

    let o = rvclab(&["color", "--rule", "complete-rvcl", "--m", "4", "--n", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("3 <= m <= n"));
}

#[test]
fn color_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let g = construct(d, "k3.json", &["--core", "complete:3", "--flare", "complete:4"]);
    let c = d.join("c.json");
    rvclab(&["color", "--rule", "complete-rvcl", "--m", "3", "--n", "4", "--out", c.to_str().unwrap()]);
    assert_eq!(code(&rvclab(&["verify", g.to_str().unwrap(), c.to_str().unwrap()])), 0);
}

#[test]
fn reproduce_tables() {
    let o = rvclab(&["reproduce", "--theorem", "cycle-rvc", "--m", "3..7", "--n", "2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "family,m,n,target,predicted,branch,construction_valid,exact,agreement");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.ends_with(",MATCH")));

    let o = rvclab(&["reproduce", "--theorem", "complete-rvcl", "--m", "3", "--n", "3..4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for r in rows.as_array().unwrap() {
        assert_eq!(r["agreement"], "MATCH");
        assert_eq!(r["branch"], "n>=|E(K_m)|-1");
    }
}

#[test]
fn reproduce_errata_exit_codes() {
    // The path rule's m = 3 defect is reported, and only the whitelist lets it pass.
    assert_eq!(code(&rvclab(&["reproduce", "--theorem", "path", "--m", "2..4", "--n", "2..3"])), 1);
    let o = rvclab(&["reproduce", "--theorem", "path", "--m", "2..4", "--n", "2..3", "--allow-errata"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("CONSTRUCTION_FAILS").count(), 2);
    assert_eq!(code(&rvclab(&["reproduce", "--theorem", "nope"])), 2);
    assert_eq!(code(&rvclab(&["reproduce", "--theorem", "path", "--m", "4..2"])), 2);
}
