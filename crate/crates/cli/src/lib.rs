//! Command-line front end: argument grammar, artifact writers, subcommands
//! and the acceptance criteria behind `selftest`.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 experiment failed its
//! tolerance, 4 numerical or resource failure, 1 I/O failure.

pub mod args;
pub mod commands;
pub mod criteria;
pub mod output;

use args::{Cli, Command, Format, SelftestArgs, DEFAULT_SEED};
use clap::Parser;
use output::RunConfig;
use std::ffi::OsString;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILED: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

fn exit_for(e: &semistable::Error) -> i32 {
    if e.is_numeric() {
        EXIT_NUMERIC
    } else {
        EXIT_USAGE
    }
}

/// Parses `argv` (program name first) and runs one subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let work = || dispatch(&cli, seed);
    match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t as usize).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                eprintln!("error: cannot start {t} threads: {e}");
                EXIT_NUMERIC
            }
        },
        None => work(),
    }
}

fn dispatch(cli: &Cli, seed: u64) -> i32 {
    use commands as c;
    let result = match &cli.command {
        Command::Selftest(a) => return selftest(a, seed),
        Command::Sample(a) => c::sample(a, seed),
        Command::Cdf(a) => c::cdf(a),
        Command::Merging(a) => c::merging(a, seed),
        Command::Mlof(a) => c::mlof(a, seed),
        Command::Feller(a) => c::feller(a, seed),
        Command::Coupling(a) => c::coupling(a, seed),
        Command::Lepage(a) => c::lepage(a, seed),
        Command::Orderstats(a) => c::orderstats(a, seed),
        Command::Negligibility(a) => c::negligibility(a, seed),
        Command::Sweep(a) => c::sweep(a, seed),
    };
    let run = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_for(&e);
        }
    };
    let default_format = match cli.command {
        Command::Sample(_) | Command::Cdf(_) => Format::Csv,
        _ => Format::Json,
    };
    let config = RunConfig {
        command: cli.command.name().to_string(),
        params: cli.command.params(),
        seed,
        out: cli.out.as_ref().map(|p| p.display().to_string()),
        format: cli.format.unwrap_or(default_format),
    };
    if let Err(e) = output::emit(&config, cli.out.as_deref(), run.summaries, &run.table) {
        eprintln!("error: cannot write output: {e}");
        return EXIT_IO;
    }
    for line in &run.status {
        eprintln!("{line}");
    }
    if run.pass {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn selftest(a: &SelftestArgs, seed: u64) -> i32 {
    let mut settings = criteria::Settings::new(seed);
    if let Some(tol) = a.g_tol {
        settings.g_tol = tol;
    }
    settings.exe = std::env::current_exe().ok();
    let chosen: Vec<_> = criteria::criteria()
        .into_iter()
        .filter(|c| if a.only.is_empty() { a.all || c.fast } else { a.only.contains(&c.id) })
        .collect();
    if chosen.is_empty() {
        eprintln!("error: no criteria selected");
        return EXIT_USAGE;
    }
    let mut failed = 0;
    for c in &chosen {
        let outcome = criteria::evaluate(c, &settings);
        println!("{}", outcome.line());
        if !outcome.pass() {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", chosen.len() - failed, chosen.len());
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}
