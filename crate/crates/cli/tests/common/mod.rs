#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use corrules_testkit::synthetic_drift_table;

pub fn tiny_csv() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/tiny.csv")
}

pub fn corrules(workers: usize, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_corrules"))
        .args(args)
        .env("CORRULES_WORKERS", workers.to_string())
        .env_remove("RUST_LOG")
        .output()
        .expect("run corrules")
}

/// Runs and requires exit 0.
pub fn ok(workers: usize, args: &[&str]) -> Output {
    let out = corrules(workers, args);
    assert!(
        out.status.success(),
        "corrules {args:?} failed with {:?}:\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

/// Runs every subcommand once, writing into `dir`. Input tables live in
/// `shared` so that manifests (which record input paths) are comparable.
pub fn full_pipeline(shared: &Path, dir: &Path, workers: usize) {
    let tiny = tiny_csv();
    let tiny = tiny.to_str().unwrap();
    let w = workers;

    // planted data: mining and model building
    let sc = dir.join("planted");
    ok(w, &["gen-scenario", "--kind", "planted", "--seed", "3", "--n-instances", "800", "--out-dir", &p(dir, "planted")]);
    let vocab = p(&sc, "vocab.json");
    let mng = p(&sc, "mng.jsonl");
    let tst = p(&sc, "tst.jsonl");
    ok(w, &["mine", "--data", &mng, "--vocab", &vocab, "--out", &p(dir, "rules.jsonl")]);
    ok(w, &["mine", "--data", &mng, "--vocab", &vocab, "--minimal", "-K", "3", "--out", &p(dir, "minimal.jsonl")]);
    ok(w, &["validate", "--rules", &p(dir, "rules.jsonl"), "--data", &tst, "--vocab", &vocab, "--out", &p(dir, "valid.jsonl")]);
    ok(w, &["drift-filter", "--rules", &p(dir, "valid.jsonl"), "--data", &tst, "--vocab", &vocab, "--lambda-drift", "0.95", "--out", &p(dir, "drift.jsonl")]);
    ok(w, &["build", "--rules", &p(dir, "valid.jsonl"), "--data", &mng, "--vocab", &vocab, "--out", &p(dir, "crs.jsonl")]);
    ok(w, &["build", "--rules", &p(dir, "valid.jsonl"), "--data", &mng, "--vocab", &vocab, "--kind", "crl", "--objective", "log-loss", "--max-rules", "5", "--out", &p(dir, "crl.jsonl")]);
    ok(w, &["apply", "--model", &p(dir, "crl.jsonl"), "--data", &tst, "--vocab", &vocab, "--out", &p(dir, "corrected.csv")]);
    ok(w, &["evaluate", "--model", &p(dir, "crs.jsonl"), "--data", &tst, "--vocab", &vocab, "--out", &p(dir, "metrics.json")]);
    ok(w, &["summarize", "--rules", &p(dir, "rules.jsonl"), "--data", &mng, "--vocab", &vocab, "-k", "5", "--seed", "1", "--out", &p(dir, "reps.jsonl")]);

    // table ingestion and the split generators
    ok(w, &["prepare", "--input", tiny, "--score-col", "score", "--label-col", "label", "--write-vocab", &p(dir, "tiny_vocab.json"), "--out", &p(dir, "tiny.jsonl")]);
    ok(w, &["gen-scenario", "--kind", "lack", "--input", tiny, "--label-col", "label", "--score-col", "score", "--trn", "20", "--mng", "40", "--seed", "5", "--out-dir", &p(dir, "lack")]);
    ok(w, &["prepare", "--input", &p(&dir.join("lack"), "tst.csv"), "--score-col", "score", "--label-col", "label", "--vocab", &p(dir, "tiny_vocab.json"), "--out", &p(dir, "lack_tst.jsonl")]);

    let table = shared.join("drift_table.csv");
    if !table.exists() {
        let t = synthetic_drift_table(2_000, 9);
        t.write_csv(std::fs::File::create(&table).unwrap(), b',').unwrap();
    }
    ok(w, &["gen-scenario", "--kind", "drift", "--input", table.to_str().unwrap(), "--label-col", "label", "--seed", "2", "--out-dir", &p(dir, "drift")]);
}

/// Every file under `dir` (relative path → bytes), with the wall-clock
/// field of mining statistics blanked.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
                continue;
            }
            let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
            let mut bytes = std::fs::read(&path).unwrap();
            if rel.ends_with(".stats.json") {
                let mut v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
                v["wall_time_s"] = serde_json::Value::Null;
                bytes = serde_json::to_vec(&v).unwrap();
            }
            out.insert(rel, bytes);
        }
    }
    out
}
