//! Acceptance gate. Runs the full suite, printing exactly one PASS/FAIL
//! line per criterion, enforces each criterion's wall-clock budget, then
//! checks determinism by running the binary twice and comparing bytes.
//! Exits nonzero if anything fails.

use freeline_cli::suite::{run_suite, SuiteKind};
use std::process::Command;

const LIMITS_MS: [u128; 9] = [
    5_000, 1_000, 60_000, 10_000, 30_000, 120_000, 300_000, 60_000, 120_000,
];

fn main() {
    let jobs = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8);
    let outcomes = run_suite(SuiteKind::Full, 0, jobs);
    let mut all = true;
    for o in &outcomes {
        let limit = LIMITS_MS[(o.id - 1) as usize];
        let timely = o.millis <= limit;
        let pass = o.pass && timely;
        all &= pass;
        println!(
            "CRITERION {}: {} — {} [{} ms, limit {} ms]{}",
            o.id,
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            o.millis,
            limit,
            if o.pass && !timely {
                " (check passed but exceeded its time budget)"
            } else {
                ""
            },
        );
    }

    // Criterion 10: two quick suite runs must emit byte-identical JSON.
    let bin = env!("CARGO_BIN_EXE_freeline");
    let run = || {
        Command::new(bin)
            .args([
                "verify-paper",
                "--suite",
                "quick",
                "--seed",
                "7",
                "--output",
                "json",
            ])
            .output()
            .expect("the freeline binary should run")
    };
    let first = run();
    let second = run();
    let identical = !first.stdout.is_empty() && first.stdout == second.stdout;
    let succeeded = first.status.success() && second.status.success();
    let pass10 = identical && succeeded;
    all &= pass10;
    println!(
        "CRITERION 10: {} — verify-paper --suite quick --seed 7 twice: {} bytes, byte-identical = {}, both exit 0 = {}",
        if pass10 { "PASS" } else { "FAIL" },
        first.stdout.len(),
        identical,
        succeeded
    );

    if !all {
        std::process::exit(1);
    }
}
