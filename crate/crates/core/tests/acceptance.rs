//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use smallden::verify::{self, VerifyOptions};

fn main() {
    let opts = VerifyOptions::default();
    let started = std::time::Instant::now();
    let mut failed = Vec::new();
    let mut reports = Vec::new();
    for (i, criterion) in verify::CRITERIA.iter().enumerate() {
        match criterion(&opts) {
            Ok(report) => {
                println!("{}", report.outcome.line());
                if !report.outcome.passed {
                    failed.push(report.outcome.id);
                }
                reports.push(report);
            }
            Err(e) => {
                println!("[FAIL] {:>2} errored: {e}", i + 1);
                failed.push(i as u8 + 1);
            }
        }
    }
    if reports.len() == verify::CRITERIA.len() {
        let det = verify::determinism(&opts, &reports);
        println!("{}", det.outcome.line());
        if !det.outcome.passed {
            failed.push(det.outcome.id);
        }
    } else {
        println!("[FAIL] 10 determinism skipped: earlier criteria errored");
        failed.push(10);
    }
    println!("acceptance: {} failed, {:.1}s", failed.len(), started.elapsed().as_secs_f64());
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
