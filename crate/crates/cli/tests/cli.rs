//! Binary-level tests: exit codes, stable JSON payloads, input sniffing,
//! and cache behavior.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_coxl2")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coxl2-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn betti_payload_matches_contract() {
    let out = run(&["betti", "--family", "atilde2", "--n", "4", "--format", "json"]);
    let payload = stdout_json(&out);
    assert_eq!(payload["G_support"], serde_json::json!({"2": 1, "3": 2}));
    assert_eq!(payload["lattice_degrees"], serde_json::json!([4, 5, 6]));
    assert_eq!(payload["q_threshold"], serde_json::json!(16));
    assert_eq!(payload["rank"], serde_json::json!(5));
}

#[test]
fn sphericity_prints_plain_value() {
    let out = run(&["sphericity", "--family", "btilde8", "--n", "9"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "8");
}

#[test]
fn exit_codes() {
    // Domain error: finite Weyl group has no sigma candidates.
    let dir = temp_dir("exit");
    let path = dir.join("a3.cox");
    std::fs::write(&path, "nodes: a b c\nedge: a b\nedge: b c\n").unwrap();
    let out = run(&["betti", "--in", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("finite Weyl group"));

    // Usage errors exit 2.
    let out = run(&["betti"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["betti", "--family", "atilde2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));

    // Unsupported ring for growth.
    let h2 = dir.join("h2.cox");
    std::fs::write(&h2, "nodes: a b\nedge: a b 5\n").unwrap();
    let out = run(&["growth", "--in", h2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn input_sniffing_json_and_dsl() {
    let dir = temp_dir("sniff");
    let json_path = dir.join("m.json");
    std::fs::write(&json_path, r#"{"generators":["a","b"],"m":[[1,0],[0,1]]}"#).unwrap();
    let out = run(&["classify", "--in", json_path.to_str().unwrap(), "--format", "json"]);
    let payload = stdout_json(&out);
    assert_eq!(payload["components"][0]["name"], serde_json::json!("A~1"));

    let dsl_path = dir.join("m.cox");
    std::fs::write(&dsl_path, "nodes: a b\nedge: a b inf\n").unwrap();
    let out2 = run(&["classify", "--in", dsl_path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(stdout_json(&out2), payload);
}

#[test]
fn davis_export_shape() {
    let out = run(&["davis", "--family", "atilde2", "--n", "3", "--format", "json"]);
    let payload = stdout_json(&out);
    let vertices = payload["vertices"].as_array().unwrap();
    assert_eq!(vertices.len(), 13);
    assert_eq!(vertices[0], serde_json::json!("{}"));
    let facets = payload["facets"].as_array().unwrap();
    assert!(!facets.is_empty());
    for facet in facets {
        for id in facet.as_array().unwrap() {
            assert!((id.as_u64().unwrap() as usize) < vertices.len());
        }
    }
}

#[test]
fn cache_hits_and_equality_with_fresh_recomputation() {
    let dir = temp_dir("cache");
    let dir_str = dir.to_str().unwrap();
    let scan = |d: &str| {
        run(&[
            "scan", "--family", "atilde2", "--from", "3", "--to", "5", "--format", "json",
            "--out", d,
        ])
    };
    let first = stdout_json(&scan(dir_str));
    assert_eq!(first["computed"], serde_json::json!(3));
    assert_eq!(first["cache_hits"], serde_json::json!(0));

    let second = stdout_json(&scan(dir_str));
    assert_eq!(second["computed"], serde_json::json!(0));
    assert_eq!(second["cache_hits"], serde_json::json!(3));
    assert_eq!(first["members"], second["members"]);

    // Cache soundness: a cached payload equals a fresh recomputation in a
    // clean directory.
    let fresh_dir = temp_dir("cache-fresh");
    let fresh = stdout_json(&scan(fresh_dir.to_str().unwrap()));
    assert_eq!(first["members"], fresh["members"]);
    for member in first["members"].as_array().unwrap() {
        let digest = member["digest"].as_str().unwrap();
        let cached: serde_json::Value = serde_json::from_slice(
            &std::fs::read(dir.join(format!("{digest}.json"))).unwrap(),
        )
        .unwrap();
        let recomputed: serde_json::Value = serde_json::from_slice(
            &std::fs::read(fresh_dir.join(format!("{digest}.json"))).unwrap(),
        )
        .unwrap();
        assert_eq!(cached["payload"], recomputed["payload"]);
        assert_eq!(cached["digest"], recomputed["digest"]);
    }
}

#[test]
fn cache_env_var_is_honored() {
    let dir = temp_dir("envcache");
    let out = Command::new(bin())
        .args(["scan", "--family", "atilde2", "--from", "3", "--to", "3", "--format", "json"])
        .env("COXL2_CACHE", &dir)
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let entries: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(entries.len(), 1, "expected one cached report in COXL2_CACHE");
}

#[test]
fn compare_family_specs() {
    let out = run(&["compare", "--a", "atilde2:5", "--b", "atilde2:8", "--format", "json"]);
    let payload = stdout_json(&out);
    assert_eq!(payload["a"]["lattice_degrees"], serde_json::json!([4, 6, 8]));
    assert_eq!(payload["b"]["lattice_degrees"], serde_json::json!([4, 9, 14]));
    assert_eq!(payload["verdict"], serde_json::json!("distinguishable"));

    let out = run(&["compare", "--a", "atilde2:5", "--b", "atilde2:5", "--format", "json"]);
    assert_eq!(stdout_json(&out)["verdict"], serde_json::json!("inconclusive"));
}

#[test]
fn random_scan_reports_no_counterexamples() {
    let out = run(&[
        "scan", "--ranks", "10:11", "--samples", "60", "--seed", "1", "--format", "json",
    ]);
    let payload = stdout_json(&out);
    assert_eq!(payload["counterexamples"], serde_json::json!([]));
}

#[test]
fn growth_report_values() {
    let out = run(&[
        "growth", "--family", "atilde2", "--n", "3", "--N", "4", "--q", "2", "--format", "json",
    ]);
    let payload = stdout_json(&out);
    assert_eq!(payload["coefficients"], serde_json::json!([1, 4, 11, 25, 52]));
    assert_eq!(payload["complete"], serde_json::json!(false));
    assert_eq!(payload["covolume"]["q"], serde_json::json!(2));
}
