//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Criteria run one after another so each runtime is measured without contention.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use hypolib::acceptance::{run_one, DEFAULT_SEED, RUNTIME_BUDGETS};

fn selftest_csv(dir: &Path, tag: &str) -> Result<Vec<u8>, String> {
    let out = dir.join(format!("{tag}.csv"));
    let status = Command::new(env!("CARGO_BIN_EXE_hypolib"))
        .args(["selftest", "--seed", &DEFAULT_SEED.to_string(), "--output"])
        .arg(&out)
        .stderr(std::process::Stdio::null())
        .status()
        .map_err(|e| format!("spawn: {e}"))?;
    if status.code() == Some(2) {
        return Err("selftest rejected its arguments".into());
    }
    std::fs::read(&out).map_err(|e| format!("read {}: {e}", out.display()))
}

fn determinism() -> (bool, String) {
    let dir = tempfile::tempdir().expect("temp dir");
    match (selftest_csv(dir.path(), "first"), selftest_csv(dir.path(), "second")) {
        (Ok(a), Ok(b)) if a == b && !a.is_empty() => (true, format!("{} identical bytes", a.len())),
        (Ok(a), Ok(b)) => (false, format!("outputs differ ({} vs {} bytes)", a.len(), b.len())),
        (Err(e), _) | (_, Err(e)) => (false, e),
    }
}

fn main() {
    let mut failed = Vec::new();
    for id in 1..=12 {
        let start = Instant::now();
        let outcome = run_one(id, DEFAULT_SEED).expect("criterion id in range");
        let secs = start.elapsed().as_secs_f64();
        let budget = RUNTIME_BUDGETS[id - 1];
        let in_budget = secs < budget;
        let passed = outcome.passed && in_budget;
        let timing = if in_budget { String::new() } else { format!("; runtime {secs:.2}s over {budget}s budget") };
        println!(
            "{} criterion {id:2} {} ({secs:.2}s): {}{timing}",
            if passed { "PASS" } else { "FAIL" },
            outcome.name,
            outcome.detail
        );
        if !passed {
            failed.push(id);
        }
    }
    let (ok, detail) = determinism();
    println!("{} criterion 13 selftest determinism: {detail}", if ok { "PASS" } else { "FAIL" });
    if !ok {
        failed.push(13);
    }
    if failed.is_empty() {
        println!("acceptance: all 13 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
