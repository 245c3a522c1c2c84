//! Runs every acceptance criterion over the full corpus and prints one line
//! per criterion. Exits nonzero if any criterion fails or overruns its limit.

use std::process::ExitCode;

use gentle::suite::{run_suite, SuiteConfig};

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    println!("acceptance: corpus {:?}, seed {:#x}", cfg.corpus, cfg.seed);
    let report = match run_suite(cfg) {
        Ok(r) => r,
        Err(e) => {
            println!("[FAIL] corpus could not be built: {e}");
            return ExitCode::FAILURE;
        }
    };
    for c in &report.criteria {
        match c.limit_seconds {
            Some(l) => println!("{} [limit {l:.0}s]", c.line()),
            None => println!("{}", c.line()),
        }
    }
    let failed = report.criteria.iter().filter(|c| !c.passed).count();
    println!("acceptance: {} passed, {failed} failed", report.criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
