//! `framebound`: bound tables, frame analysis and packing search.
//!
//! Exit codes: 0 success, 1 a bound or check failed, 2 usage error,
//! 3 invalid input.

mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bounds(a) => commands::bounds(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Optimize(a) => commands::optimize(a),
        Command::CircleExample(a) => commands::circle_example(a),
    };
    match result {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Usage(_) = e {
                eprintln!("see `framebound help` for usage");
            }
            ExitCode::from(e.code())
        }
    }
}
