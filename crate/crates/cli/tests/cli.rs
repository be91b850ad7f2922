use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use edgeconn_core::graph::parse_edge_list;
use serde_json::Value;
use tempfile::TempDir;

const DIAMOND: &str = "4 4\n0 1\n0 2\n1 3\n2 3\n";

fn edgeconn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgeconn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn apc_on_diamond() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", DIAMOND);
    let v = json(&edgeconn(&["apc", p(&input), "--seed", "5"]));
    assert_eq!(v["connectivity"][0][3], 2);
    assert_eq!(v["k"], Value::Null);
    assert_eq!(
        (v["n"].as_u64(), v["m"].as_u64(), v["seed"].as_u64()),
        (Some(4), Some(4), Some(5))
    );
    assert_eq!(v["q"], 16);
    assert!(v.get("unsafe").is_none());
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys.len(), 7);
}

#[test]
fn tsv_has_n_rows_of_n() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", DIAMOND);
    let out = edgeconn(&["apc", p(&input), "--format", "tsv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.split('\t').count() == 4));
    assert_eq!(rows[0], "0\t1\t1\t2");
}

#[test]
fn missing_file_exits_2() {
    let out = edgeconn(&["apc", "/definitely/not/here.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [
        ("loop.txt", "2 1\n1 1\n"),
        ("multi.txt", "2 2\n0 1\n0 1\n"),
        ("junk.txt", "2 1\n0 x\n"),
    ] {
        let input = write(&dir, name, text);
        let out = edgeconn(&["apc", p(&input)]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains("line"),
            "{name}"
        );
    }
}

#[test]
fn kapc_examples() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", DIAMOND);
    let v = json(&edgeconn(&["kapc", p(&input), "--k", "1"]));
    assert_eq!(v["connectivity"][0][3], 1);
    assert_eq!(v["k"], 1);

    let exact = json(&edgeconn(&["apc", p(&input), "--seed", "9"]));
    let capped = json(&edgeconn(&["kapc", p(&input), "--k", "10", "--seed", "9"]));
    assert_eq!(exact["connectivity"], capped["connectivity"]);
    assert_eq!(exact["q"], capped["q"]);

    let out = edgeconn(&["kapc", p(&input), "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dense_cb_flag_gives_same_table() {
    let dir = TempDir::new().unwrap();
    let gen = edgeconn(&["gen", "9", "30", "--seed", "4"]);
    let input = write(&dir, "g.txt", std::str::from_utf8(&gen.stdout).unwrap());
    let a = edgeconn(&["kapc", p(&input), "--k", "2", "--seed", "1"]);
    let b = edgeconn(&["kapc", p(&input), "--k", "2", "--seed", "1", "--dense-cb"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn q_override_below_bound_is_marked_unsafe() {
    let dir = TempDir::new().unwrap();
    let gen = edgeconn(&["gen", "10", "30", "--seed", "2"]);
    let input = write(&dir, "g.txt", std::str::from_utf8(&gen.stdout).unwrap());
    let v = json(&edgeconn(&["apc", p(&input), "--q-override", "16"]));
    assert_eq!(v["unsafe"], true);
    assert_eq!(v["q"], 16);
    let v = json(&edgeconn(&["apc", p(&input), "--q-override", "64"]));
    assert!(v.get("unsafe").is_none());
    assert_eq!(v["q"], 64);
    assert_eq!(
        edgeconn(&["apc", p(&input), "--q-override", "8"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn oracle_subcommand() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", DIAMOND);
    let v = json(&edgeconn(&["oracle", p(&input)]));
    assert_eq!(v["connectivity"][0][3], 2);
}

#[test]
fn gen_round_trips_and_is_deterministic() {
    let a = edgeconn(&["gen", "12", "40", "--seed", "7"]);
    let b = edgeconn(&["gen", "12", "40", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let g = parse_edge_list(std::str::from_utf8(&a.stdout).unwrap()).unwrap();
    assert_eq!((g.n(), g.m()), (12, 40));

    let dir = TempDir::new().unwrap();
    let file = dir.path().join("dag.txt");
    let out = edgeconn(&[
        "gen",
        "12",
        "40",
        "--acyclic",
        "--seed",
        "7",
        "-o",
        p(&file),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    let dag = parse_edge_list(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert!(dag.topological_order().is_some());
    assert!(edgeconn(&["apc", p(&file)]).status.success());

    assert_eq!(edgeconn(&["gen", "3", "7"]).status.code(), Some(2));
}

#[test]
fn verify_random_batch() {
    let v = json(&edgeconn(&[
        "verify", "--random", "8", "20", "50", "--seeds", "4",
    ]));
    assert_eq!(v["runs"], 200);
    assert!(v["failure_rate"].as_f64().unwrap() <= 1.0 / 8.0);
    assert_eq!(v["per_seed"].as_array().unwrap().len(), 4);

    let v = json(&edgeconn(&[
        "verify", "--random", "8", "20", "10", "--seeds", "2", "--k", "2",
    ]));
    assert_eq!(v["k"], 2);
}

#[test]
fn verify_single_file_is_stable() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.txt", DIAMOND);
    let a = edgeconn(&["verify", p(&input), "--seeds", "3", "--seed", "11"]);
    let b = edgeconn(&["verify", p(&input), "--seeds", "3", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["failed_runs"], 0);
}

#[test]
fn bench_reports_dimensions() {
    let out = edgeconn(&["bench", "--sizes", "10:30", "--k", "2", "--seed", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(
        lines[0],
        "algo,n,m,k,q,invert_dim,build_ms,invert_ms,ranks_ms,total_ms"
    );
    assert!(lines[2].starts_with("apc,10,30,,32,30,"));
    assert!(lines[3].starts_with("kapc,10,30,2,32,60,"));
}

#[test]
fn series_check_reports_cyclic_failures() {
    let out = edgeconn(&["series-check", "--exhaustive-n", "2", "--random", "0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("graphs 5 (acyclic 4)"));
    assert!(text.contains("Cancellation"));
    // the 2-cycle is a counterexample to the cancellation identity
    assert_eq!(out.status.code(), Some(1));

    let dags_only = edgeconn(&["series-check", "--exhaustive-n", "1", "--random", "0"]);
    assert!(dags_only.status.success());
}
