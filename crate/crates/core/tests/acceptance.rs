//! One line per acceptance criterion; exits nonzero if any fails or runs
//! over its time budget.

use johnson_levine::verify::{run_check, CHECKS};

const SEED: u64 = 7;

fn main() {
    let mut failed = 0;
    for (i, check) in CHECKS.iter().enumerate() {
        let r = run_check(check, SEED);
        let status = if r.ok() { "PASS" } else { "FAIL" };
        println!(
            "{status} {:>2} {:<24} {:>7.2}s / {:>3}s budget  {}",
            i + 1,
            r.name,
            r.elapsed.as_secs_f64(),
            check.budget.as_secs(),
            r.detail
        );
        if let Some(c) = r.counterexample.as_ref().filter(|_| !r.ok()) {
            println!("     counterexample: {c}");
        }
        failed += usize::from(!r.ok());
    }
    println!("{} of {} criteria pass (seed {SEED})", CHECKS.len() - failed, CHECKS.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
