use std::process::ExitCode;

use clap::Parser;
use hurwitz_forge::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(execute(&cli))
}
