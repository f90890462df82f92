//! Runs the seeded property suite and prints its report.

use johnson_levine::verify::run_suite;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let report = run_suite("all", seed).unwrap();
    print!("{}", report.to_text());
    std::process::exit(if report.all_passed() { 0 } else { 1 });
}
