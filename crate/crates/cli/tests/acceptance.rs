//! Runs every acceptance criterion and prints one PASS/FAIL line for each.
//! Exits non-zero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::{Command, ExitCode};
use std::time::Instant;

use common::criteria::{self, Outcome};

/// The raw `solutions` array from a JSON report, byte for byte.
fn solutions_text(json: &str) -> Option<&str> {
    let start = json.find("\"solutions\":")?;
    let end = json.find(",\"failures\":")?;
    Some(&json[start..end])
}

fn bench_json(threads: &str) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_homcont"))
        .args(["bench", "katsura", "8", "--json", "--threads", threads])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit status {}", out.status));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn parallel_determinism() -> Outcome {
    let one = bench_json("1")?;
    let four = bench_json("4")?;
    let (a, b) = (
        solutions_text(&one).ok_or("no solutions array")?,
        solutions_text(&four).ok_or("no solutions array")?,
    );
    if a != b {
        return Err("solution arrays differ between 1 and 4 threads".into());
    }
    let count = a.matches("\"point\"").count();
    Ok(format!("{count} solutions, {} identical bytes", a.len()))
}

type Check = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let checks: [Check; 8] = [
        ("circle success", criteria::circle_success),
        ("circle failure", criteria::circle_failure),
        ("solution counts", criteria::solution_counts),
        ("gevp oracle", criteria::gevp_oracle),
        ("slp suite", criteria::slp_suite),
        ("parallel determinism", parallel_determinism),
        ("katsura 11 smoke", criteria::katsura_eleven),
        ("tracker micro-oracles", criteria::tracker_micro),
    ];
    let mut failed = 0;
    for (k, (name, check)) in checks.iter().enumerate() {
        let clock = Instant::now();
        let outcome = check();
        let secs = clock.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.2} s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.2} s]", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
