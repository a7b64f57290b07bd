//! The `tropdiv` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tropdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropdiv")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn chain_new_writes_a_loadable_chain() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    let out = tropdiv(&["chain-new", "--g", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["genus"], 3);
    assert_eq!(v["top"].as_array().unwrap().len(), 3);
    let again = tropdiv(&[
        "chain-new",
        "--g",
        "3",
        "--lengths",
        path.to_str().unwrap(),
        "--require-generic",
    ]);
    assert!(again.status.success());
    assert_eq!(json(&again), v);
}

#[test]
fn chain_new_rejects_bad_requests() {
    assert_eq!(tropdiv(&["chain-new", "--g", "1"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let equal = write(
        dir.path(),
        "eq.json",
        r#"{"genus": 2, "top": ["1", "1"], "bottom": ["1", "1"], "bridges": ["1"]}"#,
    );
    let out = tropdiv(&["chain-new", "--g", "2", "--lengths", &equal, "--require-generic"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("generic"));
    assert!(tropdiv(&["chain-new", "--g", "2", "--lengths", &equal])
        .status
        .success());
    assert_eq!(
        tropdiv(&["chain-new", "--g", "3", "--lengths", &equal]).status.code(),
        Some(2)
    );
    assert_eq!(tropdiv(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn reduce_on_a_general_graph() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(
        dir.path(),
        "g.json",
        r#"{"vertices": ["a", "b"], "edges": [{"tail": 0, "head": 1, "length": "1"}, {"tail": 0, "head": 1, "length": "2"}]}"#,
    );
    let div = write(
        dir.path(),
        "d.json",
        r#"[{"point": {"edge": 1, "offset": "1/2"}, "coeff": 1}]"#,
    );
    let out = tropdiv(&["reduce", "--graph", &graph, "--divisor", &div, "--base", "a"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    // A single chip on a circle of length 3 is reduced at any point, so it stays put.
    assert_eq!(v["reduced"], v["input"]);
    let moved = tropdiv(&["reduce", "--graph", &graph, "--divisor", &div, "--base", "v:1"]);
    assert_eq!(json(&moved)["reduced"][0]["coeff"], 1);
    let on_edge = tropdiv(&["reduce", "--graph", &graph, "--divisor", &div, "--base", "e:1:1/2"]);
    assert!(on_edge.status.success());
    assert_eq!(
        tropdiv(&["reduce", "--graph", &graph, "--divisor", &div, "--base", "e:1:7"])
            .status
            .code(),
        Some(2)
    );
    let bad = write(dir.path(), "bad.json", "[{\"point\": 3}]");
    assert_eq!(
        tropdiv(&["reduce", "--graph", &graph, "--divisor", &bad, "--base", "a"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn rr_check_passes_and_is_reproducible() {
    let a = tropdiv(&["rr-check", "--g", "2", "--trials", "6", "--seed", "9"]);
    assert!(a.status.success());
    let b = tropdiv(&["rr-check", "--g", "2", "--trials", "6", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["passed"], 6);
    let none = tropdiv(&["rr-check", "--g", "2", "--trials", "0"]);
    assert!(none.status.success());
    assert!(String::from_utf8_lossy(&none.stderr).contains("warning"));
    assert_eq!(tropdiv(&["rr-check", "--trials", "1"]).status.code(), Some(2));
}

#[test]
fn gp0_reports_independence() {
    let out = tropdiv(&["gp0", "--g", "4", "--r", "1", "--d", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["verdict"], "independent");
        assert_eq!(r["partition_holds"], true);
        assert_eq!(r["empty_cells"].as_array().unwrap().len(), 4);
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("tableau 1"));
    let one = tropdiv(&["gp0", "--g", "4", "--r", "1", "--d", "3", "--tableau", "1"]);
    assert_eq!(json(&one)[0], reports[1]);
    assert_eq!(
        tropdiv(&["gp0", "--g", "6", "--r", "3", "--d", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tropdiv(&["gp0", "--g", "4", "--r", "1", "--d", "3", "--tableau", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn shape_needs_a_chain() {
    let dir = tempfile::tempdir().unwrap();
    let chain_path = dir.path().join("c.json");
    tropdiv(&["chain-new", "--g", "2", "--out", chain_path.to_str().unwrap()]);
    let chain = chain_path.to_str().unwrap();
    let div = write(
        dir.path(),
        "d.json",
        r#"[{"point": {"edge": 0, "offset": "1"}, "coeff": 2}]"#,
    );
    let out = tropdiv(&["shape", "--graph", chain, "--divisor", &div]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["loops"].as_array().unwrap().len(), 2);
    let graph = write(
        dir.path(),
        "g.json",
        r#"{"vertices": ["a", "b"], "edges": [{"tail": 0, "head": 1, "length": "1"}]}"#,
    );
    assert_eq!(
        tropdiv(&["shape", "--graph", &graph, "--divisor", &div]).status.code(),
        Some(2)
    );
}
