//! Runs every acceptance criterion at full scale and prints one line each.
//! Exits nonzero if any criterion fails.

use semistable_cli::args::DEFAULT_SEED;
use semistable_cli::criteria::{criteria, evaluate, Settings};
use std::path::PathBuf;

fn main() {
    let mut settings = Settings::new(DEFAULT_SEED);
    settings.exe = Some(PathBuf::from(env!("CARGO_BIN_EXE_semistable")));
    let all = criteria();
    let mut failed = Vec::new();
    for c in &all {
        let outcome = evaluate(c, &settings);
        println!("{}", outcome.line());
        if !outcome.pass() {
            failed.push(c.id);
        }
    }
    println!("acceptance: {} of {} criteria passed", all.len() - failed.len(), all.len());
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
