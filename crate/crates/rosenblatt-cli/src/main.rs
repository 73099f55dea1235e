//! Command-line driver: path simulation, measure-change verification,
//! numerical self-tests and the worked shift examples.
//!
//! Exit codes are a stable contract:
//!   0  success / all verdicts pass
//!   1  usage or validation error, or a failed verification verdict
//!   2  importance-weight degeneracy (ESS collapsed)
//!   3  drift-removal input not reducible (D < 0 somewhere)

use clap::Parser;
use std::process::ExitCode;

mod commands;
mod config;
mod csvout;

use config::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    let outcome = match cli.command {
        Command::Simulate(args) => commands::simulate::run(args),
        Command::Verify(args) => commands::verify::run(args),
        Command::Selftest(args) => commands::selftest::run(args),
        Command::Examples(args) => commands::examples::run(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
