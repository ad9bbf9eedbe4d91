use std::io::Write;
use std::process::ExitCode;

use amr_intens::cli::{run, RunConfig};
use amr_intens::scope::DeterminerTable;
use clap::Parser;

fn main() -> ExitCode {
    let mut config = RunConfig::parse();
    config.determiners = std::env::var(DeterminerTable::ENV_VAR).ok();
    let outcome = run(&config, &mut std::io::stdin().lock());
    // Broken pipes are not worth reporting.
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
