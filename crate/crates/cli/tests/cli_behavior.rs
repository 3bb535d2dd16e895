//! End-to-end behavior of the `ffrt` binary: exit-code conventions, report
//! determinism, cache round trips and eviction, input validation.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_ffrt")
}

fn rings_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../rings")
}

fn tmp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("ffrt-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str], cache_dir: &Path) -> Output {
    Command::new(exe())
        .args(args)
        .env("FFRT_CACHE_DIR", cache_dir)
        .output()
        .expect("binary runs")
}

#[test]
fn certify_exit_codes() {
    let dir = tmp_dir("codes");
    let cusp = rings_dir().join("cusp2.json");
    let cusp = cusp.to_str().unwrap();
    // found: exit 0
    let out = run(&["certify-ffrt", "--ring", cusp, "--e-max", "3"], &dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // not found within bound: exit 2 with a report, not an error
    let out = run(&["certify-ffrt", "--ring", cusp, "--e-max", "1", "--no-cache"], &dir);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["payload"]["status"], "not_found_within_bound");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn hard_errors_exit_one() {
    let dir = tmp_dir("hard");
    // malformed ring file
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["jset", "--ring", bad.to_str().unwrap(), "--e", "1"], &dir);
    assert_eq!(out.status.code(), Some(1));
    // invalid prime
    let notprime = dir.join("p4.json");
    std::fs::write(&notprime, r#"{"p": 4, "n": 1, "generators": [[1]]}"#).unwrap();
    let out = run(&["jset", "--ring", notprime.to_str().unwrap(), "--e", "1"], &dir);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prime"));
    // parameter arity: lc without --i
    let poly = rings_dir().join("poly2_p2.json");
    let out = run(
        &["lc", "--ring", poly.to_str().unwrap(), "--ideal", "x,y", "--box", "(-2,-2)..(0,0)"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(1));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn undersized_cutoff_is_inconclusive() {
    let dir = tmp_dir("cutoff");
    let cusp = rings_dir().join("cusp2.json");
    let out = run(
        &["decompose", "--ring", cusp.to_str().unwrap(), "--e", "2", "--cutoff", "3", "--no-cache"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["status"], "inconclusive");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn cache_round_trip_and_eviction() {
    let dir = tmp_dir("cache");
    let ring = rings_dir().join("poly1_p3.json");
    let ring = ring.to_str().unwrap();
    let args = ["jset", "--ring", ring, "--e", "2"];
    let first = run(&args, &dir);
    assert_eq!(first.status.code(), Some(0));
    // cache now has exactly one entry; second run must be byte-identical
    let entries: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".report.json"))
        .collect();
    assert_eq!(entries.len(), 1);
    let second = run(&args, &dir);
    assert_eq!(first.stdout, second.stdout);
    // verify-cache recomputes and compares
    let out = run(&["verify-cache"], &dir);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"ok\""));
    // corrupt the entry: it must be evicted and recomputed, not served
    std::fs::write(entries[0].path(), b"garbage").unwrap();
    let third = run(&args, &dir);
    assert_eq!(third.status.code(), Some(0));
    assert_eq!(first.stdout, third.stdout);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn no_cache_leaves_directory_empty() {
    let dir = tmp_dir("nocache");
    let ring = rings_dir().join("poly1_p2.json");
    let out = run(&["jset", "--ring", ring.to_str().unwrap(), "--e", "1", "--no-cache"], &dir);
    assert_eq!(out.status.code(), Some(0));
    let entries = std::fs::read_dir(&dir).unwrap().count();
    assert_eq!(entries, 0);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn out_flag_writes_identical_bytes() {
    let dir = tmp_dir("out");
    let ring = rings_dir().join("cusp2.json");
    let path = dir.join("report.json");
    let out = run(
        &[
            "decompose",
            "--ring",
            ring.to_str().unwrap(),
            "--e",
            "1",
            "--no-cache",
            "--out",
            path.to_str().unwrap(),
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let file_bytes = std::fs::read(&path).unwrap();
    assert_eq!(file_bytes, out.stdout);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn decompose_report_shape() {
    let dir = tmp_dir("shape");
    let ring = rings_dir().join("veronese2_p3.json");
    let out = run(
        &["decompose", "--ring", ring.to_str().unwrap(), "--e", "1", "--no-cache"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let d = &v["result"]["payload"]["decomposition"];
    assert_eq!(d["classes"].as_array().unwrap().len(), 9);
    assert_eq!(d["jset"]["classes"].as_array().unwrap().len(), 2);
    let cert = &v["result"]["payload"]["certificate"];
    assert_eq!(cert["certificate"]["a"], 1);
    assert_eq!(cert["certificate"]["b"], 1);
    // every class entry names its isomorphism class
    for entry in d["classes"].as_array().unwrap() {
        assert!(entry["iso_class_id"].as_u64().unwrap() < 2);
    }
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn monomial_and_box_parsing() {
    let dir = tmp_dir("parse");
    let ring = rings_dir().join("poly2_p2.json");
    let ring = ring.to_str().unwrap();
    // vector-literal ideal generators are equivalent to variable names
    let a = run(
        &["ass", "--ring", ring, "--ideal", "x,y", "--i", "2", "--box", "(-3,-3)..(0,0)", "--no-cache"],
        &dir,
    );
    let b = run(
        &["ass", "--ring", ring, "--ideal", "(1,0),(0,1)", "--i", "2", "--box", "(-3,-3)..(0,0)", "--no-cache"],
        &dir,
    );
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
    let _ = std::fs::remove_dir_all(&dir);
}
