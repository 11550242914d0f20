//! The acceptance suite, one line per criterion.

use std::process::ExitCode;

use gerbecoh::selftest::{run, Config};

fn main() -> ExitCode {
    let report = run(&Config::default());
    for c in &report.criteria {
        println!("{} criterion {:>2} ({}): {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.title, c.summary);
    }
    let failed: Vec<usize> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
