//! One line per acceptance criterion; exits non-zero if any fails.

use kinsv::verify::Verifier;

fn main() {
    // libtest flags such as --nocapture are irrelevant here
    let filter: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut verifier = Verifier::new();
    let mut failed = 0;
    for id in 1..=10 {
        if filter.is_some_and(|f| f != id) {
            continue;
        }
        match verifier.criterion(id) {
            Ok(outcome) => {
                if !outcome.passed {
                    failed += 1;
                }
                println!("{outcome}");
            }
            Err(e) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  error: {e}");
            }
        }
    }
    println!("acceptance: {} failed", failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
