use std::process::{Command, Output};

use serde_json::Value;
use tmdyn_core::{builtin_machine, eps_graph, Direction};

fn tmdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmdyn")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn analyze_utm() {
    let o = tmdyn(&["analyze", "--machine", "utm_6_4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["certificate"]["verdict"], "strongly-regular");
    assert_eq!(r["certificate"]["bound"]["over"], 1);
    assert!(r["certificate"]["bound"]["log_of"].as_u64().unwrap() >= 2);
    assert!(r["regularity"].is_object());
    assert_eq!(r["conjugacy"]["failed"], 0);
    assert_eq!(r["machine"]["name"], "utm_6_4");
    assert_eq!(r["phi_table"].as_array().unwrap().len(), 24);
}

#[test]
fn analyze_wutm() {
    let o = tmdyn(&["analyze", "--machine", "wutm_6_2", "--n-max", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["certificate"]["verdict"], "regular");
    assert!(r["strong_regularity"].is_null());
    assert_eq!(r["certificate"]["witness"]["base"], "u4");
    assert_eq!(r["entropy"]["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn analyze_is_reproducible_and_writes_files() {
    let a = tmdyn(&["analyze", "--machine", "wutm_6_2", "--seed", "5"]);
    let b = tmdyn(&["analyze", "--machine", "wutm_6_2", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 5);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = tmdyn(&["analyze", "--machine", "wutm_6_2", "--seed", "5", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}

#[test]
fn bad_file_gives_line_numbered_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tm");
    std::fs::write(&path, "states: a h\nalphabet: 0 1\nblank: 0\ninitial: a\nhalting: h\na 0 -> a 0 R\na 1 -> b 0 R\n")
        .unwrap();
    let o = tmdyn(&["analyze", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 7"), "{}", stderr(&o));
}

#[test]
fn file_machines_are_analyzed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runner.tm");
    std::fs::write(&path, "states: a h\nalphabet: 0 1\nblank: 0\ninitial: a\nhalting: h\na 0 -> a 0 R\na 1 -> a 1 R\n")
        .unwrap();
    let o = tmdyn(&["analyze", "--file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&o);
    assert_eq!(r["machine"]["source"], "file");
    assert_eq!(r["machine"]["fingerprint"].as_str().unwrap().len(), 64);
    assert_eq!(r["certificate"]["verdict"], "strongly-regular");
}

#[test]
fn machine_source_errors() {
    let o = tmdyn(&["gshift", "--verify", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tmdyn(&["analyze", "--machine", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tmdyn(&["analyze", "--machine", "utm_6_4", "--file", "x.tm"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn graph_of_wutm() {
    let o = tmdyn(&["graph", "--machine", "wutm_6_2", "--eps", "+1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut edges: Vec<&str> = text.lines().filter(|l| l.contains("->")).map(str::trim).collect();
    edges.sort();
    assert_eq!(
        edges,
        [
            "\"u3\" -> \"u2\" [label=\"g\"];",
            "\"u4\" -> \"u5\" [label=\"g\"];",
            "\"u4\" -> \"u6\" [label=\"b\"];",
            "\"u5\" -> \"u4\" [label=\"b\"];",
            "\"u6\" -> \"u4\" [label=\"b\"];",
        ]
    );
}

#[test]
fn graph_matches_library() {
    let m = builtin_machine("utm_6_4").unwrap();
    let o = tmdyn(&["graph", "--machine", "utm_6_4", "--eps", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), eps_graph(&m, Direction::Minus).to_dot(&m));
    let o = tmdyn(&["--json", "graph", "--machine", "utm_6_4", "--eps", "-1"]);
    assert_eq!(json(&o)["direction"], -1);
}

#[test]
fn graph_rejects_bad_eps() {
    let o = tmdyn(&["graph", "--machine", "utm_6_4", "--eps", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn entropy_with_oracle() {
    let o = tmdyn(&["entropy", "--machine", "utm_6_4", "--n-max", "6", "--oracle"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,count,e_n,min_e_n");
    assert_eq!(lines.len(), 7);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        let n: u32 = fields[0].parse().unwrap();
        let count: u64 = fields[1].parse().unwrap();
        assert!(count >= 1 << n);
    }
}

#[test]
fn entropy_json_and_budget() {
    let o = tmdyn(&["--json", "entropy", "--machine", "wutm_6_2", "--n-max", "3", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["oracle"].as_array().unwrap().len(), 3);
    assert_eq!(r["rows"][0]["count"], r["oracle"][0]["oracle"]);

    let o = tmdyn(&["entropy", "--machine", "utm_6_4", "--n-max", "8", "--node-budget", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn entropy_rejects_zero_length() {
    let o = tmdyn(&["entropy", "--machine", "utm_6_4", "--n-max", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_one_step() {
    let o = tmdyn(&["simulate", "--machine", "utm_6_4", "--state", "u2", "--tape", "b", "--steps", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    // g written at old cell 0, now cell -1 after the tape shift
    assert!(text.starts_with("1: u2: … g . g"), "{text}");
    assert!(text.contains("u2 b -> u2 g R"));
}

#[test]
fn simulate_zero_steps_and_halting() {
    let o = tmdyn(&["simulate", "--machine", "utm_6_4", "--state", "u3", "--tape", "b . c", "--steps", "0"]);
    assert_eq!(stdout(&o), "0: u3: … b . c g …\n");

    let o = tmdyn(&["simulate", "--machine", "utm_6_4", "--state", "u6", "--tape", "c", "--steps", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("halting time: 1\n"), "{}", stdout(&o));

    let o = tmdyn(&["--json", "simulate", "--machine", "utm_6_4", "--state", "u6", "--tape", "c", "--steps", "3"]);
    let r = json(&o);
    assert_eq!(r["halting_time"], 1);
    assert_eq!(r["steps"][0]["configuration"]["state"], "halt");
}

#[test]
fn simulate_rejects_unknown_symbols() {
    let o = tmdyn(&["simulate", "--machine", "utm_6_4", "--tape", "z", "--steps", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gshift_verify_and_dump() {
    let o = tmdyn(&["gshift", "--machine", "wutm_6_2", "--verify", "1000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("conjugacy: 1000/1000 passed (seed 7)"));

    let o = tmdyn(&["gshift", "--machine", "utm_6_4", "--dump"]);
    let r = json(&o);
    assert_eq!(r["radius"], 1);
    assert_eq!(r["rules"].as_array().unwrap().len(), 6 * 4 * 4);

    let o = tmdyn(&["--halting-mode", "restart", "gshift", "--machine", "utm_6_4", "--dump"]);
    assert_eq!(json(&o)["rules"].as_array().unwrap().len(), 7 * 4 * 4);

    let o = tmdyn(&["gshift", "--machine", "utm_6_4"]);
    assert_eq!(o.status.code(), Some(2));
}
