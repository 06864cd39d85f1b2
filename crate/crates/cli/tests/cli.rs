use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_theta-closure"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

const SL3: &str = r#"{"algebra": {"type": "A", "rank": 2}, "kac_labels": [1, 0, 0], "label_bound": 2}"#;
const SL4: &str = r#"{"algebra": {"type": "A", "rank": 3}, "kac_labels": [1, 0, 0, 0], "label_bound": 2}"#;

#[test]
fn sl3_lists_two_orbits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sl3.json", SL3);
    let out = run(&["list-orbits", "--config", &cfg, "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let dims: Vec<u64> = v["orbits"].as_array().unwrap().iter().map(|o| o["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![6, 4]);
}

#[test]
fn sl4_hasse_is_a_chain() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sl4.json", SL4);
    let cache = dir.path().join("cache");
    let out = run(&["hasse", "--config", &cfg, "--cache-dir", cache.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let edges: Vec<(u64, u64)> = v["covering_edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e[0].as_u64().unwrap(), e[1].as_u64().unwrap()))
        .collect();
    assert_eq!(edges, vec![(1, 2), (2, 3), (3, 4)]);
    assert_eq!(v["closure_pairs"].as_array().unwrap().len(), 6);
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn hasse_is_cached_by_config_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sl4.json", SL4);
    let cache = dir.path().join("cache");
    let out_path = dir.path().join("h.json");
    let args = [
        "hasse",
        "--config",
        &cfg,
        "--seed",
        "11",
        "--cache-dir",
        cache.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ];
    assert!(run(&args).status.success());
    let first = std::fs::read_to_string(&out_path).unwrap();
    let doc: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["seed"].as_u64(), Some(11));
    assert!(run(&args).status.success());
    assert_eq!(std::fs::read_to_string(&out_path).unwrap(), first);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
}

#[test]
fn dot_output_groups_by_dimension() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sl4.json", SL4);
    let out = run(&["hasse", "--config", &cfg, "--no-cache", "--format", "dot"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("// theta-closure "));
    assert!(text.contains("{ rank=same; d12; n1; }"));
    assert!(text.contains("n3 -> n4;"));
}

#[test]
fn empty_fixture_gives_empty_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let fx = r#"{"case": "empty", "algebra": {"type": "A", "rank": 2}, "kac_labels": [1, 0, 0], "orbits": []}"#;
    write(dir.path(), "empty_fx.json", fx);
    let cfg = write(dir.path(), "cfg.json", r#"{"fixture": "empty_fx.json"}"#);
    let out = run(&["hasse", "--config", &cfg, "--no-cache"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["nodes"].as_array().unwrap().is_empty());
    assert!(v["covering_edges"].as_array().unwrap().is_empty());
}

#[test]
fn decide_argument_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sl3.json", SL3);
    let verdict = |a: &str, b: &str| -> bool {
        let out = run(&["decide", a, b, "--config", &cfg]);
        assert!(out.status.success());
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v["included"].as_bool().unwrap()
    };
    assert!(verdict("1", "2"));
    assert!(!verdict("2", "1"));
    assert!(!verdict("2", "2"));
}

#[test]
fn unknown_orbit_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sl3.json", SL3);
    assert_eq!(run(&["decide", "1", "9", "--config", &cfg]).status.code(), Some(4));
}

#[test]
fn bad_config_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", r#"{"algebra": {"type": "Q", "rank": 2}, "kac_labels": [1, 0, 0], "label_bound": 2}"#);
    assert_eq!(run(&["list-orbits", "--config", &cfg]).status.code(), Some(4));
    let cfg = write(dir.path(), "nosrc.json", r#"{"algebra": {"type": "A", "rank": 2}, "kac_labels": [1, 0, 0]}"#);
    assert_eq!(run(&["list-orbits", "--config", &cfg]).status.code(), Some(4));
    assert_eq!(run(&["hasse", "--no-such-flag"]).status.code(), Some(4));
}

#[test]
fn bad_fixture_row_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let fx = r#"{"case": "bad", "algebra": {"type": "A", "rank": 2}, "kac_labels": [1, 0, 0],
        "orbits": [{"id": 1, "characteristic": [2, 2], "dim": 6}, {"id": 2, "characteristic": [1, 1], "dim": 5}]}"#;
    let p = write(dir.path(), "fx.json", fx);
    let out = run(&["validate-fixtures", &p]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bad row 2: FAIL"));
    assert!(!text.contains("row 1: FAIL"));
}

#[test]
fn shipped_fixtures_validate() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/e7_order3.json");
    let out = run(&["validate-fixtures", root.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}
