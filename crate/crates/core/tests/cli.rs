use std::fs;
use std::path::Path;

use causalgen::cli::{main_with, OUT_DIR_ENV};
use serde_json::Value;
use tempfile::tempdir;

fn run(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let code = main_with(std::iter::once("causalgen").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn lines(path: &Path) -> Vec<Value> {
    fs::read_to_string(path).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn corr2cause_three_nodes_writes_all_records_with_headers() {
    let dir = tempdir().unwrap();
    let (code, _) = run(&["gen", "corr2cause", "--max-nodes", "3", "--seed", "1", "--out", p(dir.path())]);
    assert_eq!(code, 0);
    let mut records = 0;
    for split in ["train", "dev", "test"] {
        let rows = lines(&dir.path().join(format!("{split}.jsonl")));
        assert!(rows[0].get("causalgen").is_some(), "{split} lacks a header");
        records += rows.len() - 1;
    }
    assert_eq!(records, 12 + 90);
}

#[test]
fn identical_configuration_gives_identical_bytes() {
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    for d in [&a, &b] {
        let out = d.path().join("q.jsonl");
        assert_eq!(run(&["gen", "cladder", "--size", "64", "--seed", "5", "--out", p(&out)]).0, 0);
        assert_eq!(run(&["gen", "corr2cause", "--max-nodes", "4", "--seed", "5", "--out", p(d.path())]).0, 0);
    }
    for f in ["q.jsonl", "train.jsonl", "dev.jsonl", "test.jsonl"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn different_seeds_change_the_questions() {
    let dir = tempdir().unwrap();
    let (x, y) = (dir.path().join("x.jsonl"), dir.path().join("y.jsonl"));
    run(&["gen", "cladder", "--size", "32", "--seed", "1", "--out", p(&x)]);
    run(&["gen", "cladder", "--size", "32", "--seed", "2", "--out", p(&y)]);
    assert_ne!(fs::read(x).unwrap(), fs::read(y).unwrap());
}

#[test]
fn stats_on_empty_input_reports_zero() {
    let dir = tempdir().unwrap();
    let empty = dir.path().join("empty.jsonl");
    fs::write(&empty, "").unwrap();
    let (code, out) = run(&["stats", "--in", p(&empty)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["stats"]["total"].as_u64().or(v["stats"]["samples"].as_u64()), Some(0));
}

#[test]
fn stats_reads_a_generated_ladder_file() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("q.jsonl");
    run(&["gen", "cladder", "--size", "48", "--out", p(&out)]);
    let (code, text) = run(&["stats", "--in", p(&out)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["kind"], "cladder");
    assert_eq!(v["stats"]["samples"], 48);
    assert_eq!(v["stats"]["yes"], 24);
    assert_eq!(v["stats"]["mismatches"], 0);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["enumerate-graphs", "--nodes", "9"]).0, 2);
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(run(&["--config", p(&cfg), "enumerate-graphs", "--nodes", "3"]).0, 2);
}

#[test]
fn missing_input_exits_with_one() {
    assert_eq!(run(&["stats", "--in", "/nonexistent/file.jsonl"]).0, 1);
}

#[test]
fn perturb_refactor_twice_restores_the_file() {
    let dir = tempdir().unwrap();
    run(&["gen", "corr2cause", "--max-nodes", "3", "--out", p(dir.path())]);
    let src = dir.path().join("test.jsonl");
    let once = dir.path().join("once.jsonl");
    let twice = dir.path().join("twice.jsonl");
    assert_eq!(run(&["perturb", "--mode", "refactor", "--in", p(&src), "--out", p(&once)]).0, 0);
    assert_eq!(run(&["perturb", "--mode", "refactor", "--in", p(&once), "--out", p(&twice)]).0, 0);
    let strip = |path: &Path| -> Vec<Value> { lines(path).into_iter().filter(|v| v.get("causalgen").is_none()).collect() };
    assert_ne!(strip(&src), strip(&once));
    assert_eq!(strip(&src), strip(&twice));
}

#[test]
fn ci_eval_reads_a_request_file() {
    let dir = tempdir().unwrap();
    let req = dir.path().join("req.json");
    fs::write(
        &req,
        r#"{"graph":"confounding","cpds":[[0.5],[0.2,0.7],[0.1,0.3,0.6,0.8]],"query":{"kind":"ate"}}"#,
    )
    .unwrap();
    let (code, out) = run(&["ci", "eval", "--in", p(&req)]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["estimand"].as_str().unwrap().contains("V1"));
    assert!(!v["data"].as_array().unwrap().is_empty());
    assert_eq!(v["answer"], "yes");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempdir().unwrap();
    let outdir = dir.path().join("from_config");
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, format!("# defaults\nnodes = 3\nout_dir = {}\n", outdir.display())).unwrap();
    assert_eq!(run(&["--config", p(&cfg), "enumerate-graphs"]).0, 0);
    let produced: Vec<_> = fs::read_dir(&outdir).unwrap().collect();
    assert_eq!(produced.len(), 1);
    let rows = lines(&produced[0].as_ref().unwrap().path());
    assert_eq!(rows.len(), 1 + 6);

    let explicit = dir.path().join("four.jsonl");
    assert_eq!(run(&["--config", p(&cfg), "enumerate-graphs", "--nodes", "4", "--out", p(&explicit)]).0, 0);
    assert_eq!(lines(&explicit).len(), 1 + 31);
}

#[test]
fn environment_variable_sets_the_output_directory() {
    let dir = tempdir().unwrap();
    std::env::set_var(OUT_DIR_ENV, dir.path());
    let code = run(&["gen", "corr2cause", "--max-nodes", "2"]).0;
    std::env::remove_var(OUT_DIR_ENV);
    assert_eq!(code, 0);
    assert!(dir.path().join("corr2cause").join("test.jsonl").exists());
}
