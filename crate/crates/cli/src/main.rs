//! `gflat`: regenerate Glauber-Fock lattice datasets as CSV or JSON.
//!
//! Exit codes: 0 success, 1 verification failures, 2 usage or validation
//! error, 3 conservation-check or solver failure.

mod args;
mod commands;
mod descriptor;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::commands::{CliError, Outcome};

fn emit(outcome: &Outcome) -> Result<(), CliError> {
    match &outcome.out {
        Some(path) => std::fs::write(path, &outcome.payload).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.payload.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(cli.command).and_then(|outcome| {
        emit(&outcome)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            eprint!("{}", outcome.diagnostics);
            ExitCode::from(outcome.exit_code)
        }
        Err(err) => {
            eprintln!("gflat: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
