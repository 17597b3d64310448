use std::process::{Command, Output};

use serde_json::Value;

fn tessella(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tessella"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn census_exit_codes_follow_the_convention() {
    let conj = tessella(&["table1", "--convention", "conjugacy"]);
    assert_eq!(code(&conj), 0);
    assert!(String::from_utf8_lossy(&conj.stdout).contains("result: match"));
    let fixed = tessella(&["table1"]);
    assert_eq!(code(&fixed), 3);
    assert!(String::from_utf8_lossy(&fixed.stdout).contains("mismatch (4^5) direct: expected 6, computed 8"));
}

#[test]
fn census_json() {
    let o = tessella(&["table1", "--convention", "conjugacy", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], "tessella/1");
    assert_eq!(v["matched"], true);
    assert_eq!(v["cells"].as_array().unwrap().len(), 24);
}

#[test]
fn counts() {
    let o = tessella(&[
        "count",
        "-p",
        "4",
        "-q",
        "5",
        "--mode",
        "direct",
        "--convention",
        "conjugacy",
    ]);
    assert_eq!((code(&o), String::from_utf8_lossy(&o.stdout).trim()), (0, "6"));
    let o = tessella(&["count", "-p", "4", "-q", "5", "-k", "5"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn usage_and_compute_errors() {
    assert_eq!(code(&tessella(&["count", "-p", "1", "-q", "5"])), 1);
    assert_eq!(code(&tessella(&["count", "-p", "4", "-q", "5", "-k", "0"])), 1);
    assert_eq!(code(&tessella(&["bogus"])), 1);
    assert_eq!(code(&tessella(&["--help"])), 0);
    assert_eq!(code(&tessella(&["render", "-p", "3", "-q", "5"])), 2);
    assert_eq!(code(&tessella(&["render", "-p", "4", "-q", "5", "--depth", "9"])), 1);
    assert_eq!(
        code(&tessella(&["render", "-p", "4", "-q", "5", "--emphasis", "1,2,3"])),
        1
    );
    assert_eq!(
        code(&tessella(&["csl", "-p", "3", "-q", "8", "--angle", "90", "--tol", "0"])),
        1
    );
    assert_eq!(code(&tessella(&["analyse", "/nonexistent/records.json"])), 2);
}

#[test]
fn group_reports_finite_orders() {
    let o = tessella(&["group", "-p", "3", "-q", "5"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!((v["order"].as_u64(), v["tiles"].as_u64()), (Some(120), Some(20)));
    let v = json(&tessella(&["group", "-p", "4", "-q", "5", "--mode", "direct"]));
    assert_eq!(v["order"], "infinite");
    assert_eq!(v["geometry"], "hyperbolic");
}

#[test]
fn enumerate_then_analyse() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rec.json");
    let p = path.to_str().unwrap();
    let o = tessella(&[
        "enumerate",
        "-p",
        "3",
        "-q",
        "8",
        "--mode",
        "direct",
        "--convention",
        "conjugacy",
        "-o",
        p,
    ]);
    assert_eq!(code(&o), 0);
    let o = tessella(&["analyse", p, "--cycles", "vertex", "--enantiomorphs", "--quotients"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let types: Vec<Value> = v["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["cycle_type"].clone())
        .collect();
    assert_eq!(
        types,
        [
            serde_json::json!([8, 2]),
            serde_json::json!([8, 1, 1]),
            serde_json::json!([8, 2])
        ]
    );
    assert_eq!(v["reflection_fixed"], 3);

    let full = dir.path().join("full.json");
    let f = full.to_str().unwrap();
    assert_eq!(code(&tessella(&["enumerate", "-p", "4", "-q", "6", "-o", f])), 0);
    assert_eq!(code(&tessella(&["analyse", f, "--enantiomorphs"])), 1);
    let v = json(&tessella(&["analyse", f, "--quotients"]));
    let ks: Vec<u64> = v["records"][0]["quotients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|q| q["k"].as_u64().unwrap())
        .collect();
    assert!(ks.contains(&2) && ks.contains(&5));
}

#[test]
fn render_writes_deterministic_svg() {
    let args = [
        "render",
        "-p",
        "4",
        "-q",
        "5",
        "--record",
        "0",
        "--depth",
        "3",
        "--emphasis",
        "1,10",
        "--dual",
    ];
    let a = tessella(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, tessella(&args).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert!(doc.descendants().any(|n| n.attribute("id") == Some("dual")));
    assert!(doc.descendants().any(|n| n.attribute("fill") == Some("#000000")));
    assert_eq!(code(&tessella(&["render", "-p", "4", "-q", "5", "--record", "99"])), 1);
}

#[test]
fn render_to_file_with_coincidence_highlight() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.svg");
    let o = tessella(&[
        "render",
        "-p",
        "3",
        "-q",
        "8",
        "--csl-angle",
        "180",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    assert!(doc.descendants().any(|n| n.attribute("id") == Some("marks")));
}

#[test]
fn csl_report() {
    let o = tessella(&["csl", "-p", "3", "-q", "8", "--angle", "180"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], "tessella/1");
    assert_eq!(v["report"]["matched"].as_array().unwrap().len(), 6);
    assert_eq!(v["report"]["candidate_count"], 18);
    assert_eq!(v["matched_points"].as_array().unwrap().len(), 6);
    let sym = json(&tessella(&[
        "csl", "-p", "3", "-q", "8", "--angle", "45", "--centre", "vertex",
    ]));
    assert_eq!(sym["report"]["fraction"], 1.0);
}
