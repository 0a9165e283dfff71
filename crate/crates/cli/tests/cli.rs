// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const LIGHT: &str = r#"{"textual": {"n_trees": 20, "max_depth": 4}, "folds": 3}"#;

fn linkrec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkrec"))
        .current_dir(dir)
        .env_remove("HYBRID_LINKER_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = linkrec(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Synthetic corpus plus balanced candidates and a light config.
fn fixture(n: &str) -> TempDir {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("light.json"), LIGHT).unwrap();
    ok(
        dir,
        &["synth", "--seed", "1", "--issues", n, "--commits", n, "--out", "fx"],
    );
    ok(
        dir,
        &[
            "gen-links",
            "--corpus",
            "fx",
            "--balance",
            "--seed",
            "1",
            "--out",
            "cands.tsv",
        ],
    );
    tmp
}

fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = ["fx/issues.jsonl", "fx/commits.jsonl", "cands.tsv", "light.json"]
        .iter()
        .map(|f| (f.to_string(), fs::read(dir.join(f)).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn synth_gen_links_evaluate_writes_report() {
    let tmp = fixture("200");
    let dir = tmp.path();
    let before = snapshot(dir);
    let stdout = ok(
        dir,
        &[
            "--config",
            "light.json",
            "evaluate",
            "--corpus",
            "fx",
            "--candidates",
            "cands.tsv",
            "--out",
            "report.json",
            "--ablation",
        ],
    );
    assert!(stdout.starts_with("mean_f1="));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    let f1 = report["mean_f1"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&f1));
    assert_eq!(report["alphas"].as_array().unwrap().len(), 3);
    assert!(report["ablation"]["textual"]["f1"]["mean"].is_f64());
    assert_eq!(snapshot(dir), before);
}

#[test]
fn evaluate_is_byte_identical_across_runs() {
    let tmp = fixture("80");
    let dir = tmp.path();
    let args = |out: &'static str| {
        [
            "--config",
            "light.json",
            "evaluate",
            "--corpus",
            "fx",
            "--candidates",
            "cands.tsv",
            "--out",
            out,
        ]
    };
    ok(dir, &args("a.json"));
    ok(dir, &args("b.json"));
    assert_eq!(
        fs::read(dir.join("a.json")).unwrap(),
        fs::read(dir.join("b.json")).unwrap()
    );
}

#[test]
fn every_run_echoes_config_and_seeds() {
    let tmp = fixture("40");
    let out = Command::new(env!("CARGO_BIN_EXE_linkrec"))
        .current_dir(tmp.path())
        .env("HYBRID_LINKER_SEED", "9")
        .args(["gen-links", "--corpus", "fx", "--out", "pool.tsv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("config: {"));
    assert!(stderr.contains("seeds: balance=9 fold=9 split=9 textual=9 members=[9, 10]"));

    // Flags beat the config file, which beats the environment.
    fs::write(tmp.path().join("seeded.json"), r#"{"balance_seed": 3}"#).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_linkrec"))
        .current_dir(tmp.path())
        .env("HYBRID_LINKER_SEED", "9")
        .args([
            "--config",
            "seeded.json",
            "--window-days",
            "3",
            "gen-links",
            "--corpus",
            "fx",
            "--out",
            "pool.tsv",
        ])
        .output()
        .unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("seeds: balance=3 fold=9"), "{stderr}");
    assert!(stderr.contains(r#""window_days":3"#));
}

#[test]
fn train_then_predict() {
    let tmp = fixture("60");
    let dir = tmp.path();
    let before = snapshot(dir);
    ok(
        dir,
        &[
            "--config",
            "light.json",
            "train",
            "--corpus",
            "fx",
            "--candidates",
            "cands.tsv",
            "--out",
            "m.hlb",
        ],
    );
    assert_eq!(&fs::read(dir.join("m.hlb")).unwrap()[..8], b"LINKREC\0");

    let first = fs::read_to_string(dir.join("cands.tsv")).unwrap();
    let fields: Vec<&str> = first.lines().next().unwrap().split('\t').collect();
    let stdout = ok(
        dir,
        &[
            "predict", "--model", "m.hlb", "--issue", fields[0], "--commit", fields[1],
        ],
    );
    let line: Vec<&str> = stdout.trim_end().split(' ').collect();
    assert_eq!(stdout.lines().count(), 1);
    assert_eq!(line.len(), 4);
    assert_eq!((line[0], line[1]), (fields[0], fields[1]));
    let p: f64 = line[2].parse().unwrap();
    assert!((0.0..=1.0).contains(&p));
    assert_eq!(line[3], if p >= 0.5 { "1" } else { "0" });

    let pairs: String = first
        .lines()
        .map(|l| l.split('\t').take(2).collect::<Vec<_>>().join("\t") + "\n")
        .collect();
    fs::write(dir.join("pairs.tsv"), &pairs).unwrap();
    ok(
        dir,
        &[
            "predict-batch",
            "--model",
            "m.hlb",
            "--pairs",
            "pairs.tsv",
            "--out",
            "scores.tsv",
        ],
    );
    let scores = fs::read_to_string(dir.join("scores.tsv")).unwrap();
    assert_eq!(scores.lines().count(), pairs.lines().count() + 1);
    let row: Vec<&str> = scores.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(row.len(), 6);
    assert_eq!(format!("{:.6}", p), row[4]);
    assert_eq!(snapshot(dir), before);
}

#[test]
fn ingest_round_trips_corpus() {
    let tmp = fixture("30");
    let dir = tmp.path();
    let stdout = ok(
        dir,
        &[
            "ingest",
            "--issues",
            "fx/issues.jsonl",
            "--commits",
            "fx/commits.jsonl",
            "--project",
            "SYN",
            "--out",
            "copy",
        ],
    );
    assert!(stdout.starts_with("project=SYN issues=30 commits=30"));
    for f in ["issues.jsonl", "commits.jsonl"] {
        assert_eq!(
            fs::read(dir.join("fx").join(f)).unwrap(),
            fs::read(dir.join("copy").join(f)).unwrap()
        );
    }
}

#[test]
fn usage_errors_exit_2_and_pipeline_errors_exit_1() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    assert_eq!(linkrec(dir, &["evaluate", "--bogus"]).status.code(), Some(2));
    assert_eq!(linkrec(dir, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        linkrec(dir, &["--ensemble", "svm+nb", "synth", "--out", "x"])
            .status
            .code(),
        Some(2)
    );

    let missing = linkrec(
        dir,
        &["predict", "--model", "absent.hlb", "--issue", "I1", "--commit", "C1"],
    );
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("error: "));
    fs::write(dir.join("bad.json"), r#"{"folds": 1}"#).unwrap();
    assert_eq!(
        linkrec(dir, &["--config", "bad.json", "synth", "--out", "x"])
            .status
            .code(),
        Some(1)
    );
}
