use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use quiverk::cli::{execute, Cli, MAX_BINOMIAL_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limit = std::env::var(MAX_BINOMIAL_ENV).ok();
    let report = execute(&cli, limit.as_deref());
    let _ = std::io::stdout().write_all(report.stdout.as_bytes());
    let _ = std::io::stderr().write_all(report.stderr.as_bytes());
    ExitCode::from(report.exit_code as u8)
}
