//! Command-line harness over `hurwitz-core`: tuple files in, reports out.

pub mod args;
pub mod commands;
pub mod experiments;
pub mod report;

use std::fs;
use std::io::Write;

pub use args::{Cli, Command, Format};
pub use report::{CliError, Report, Status};

/// Runs a parsed command line: renders the report to `--out` or standard
/// output and returns the process exit code.
pub fn execute(cli: &Cli) -> u8 {
    match commands::run_command(&cli.command).and_then(|report| emit(cli, &report).map(|_| report)) {
        Ok(report) => report.status.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let text = report.render(cli.format);
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Write {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
