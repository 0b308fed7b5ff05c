use std::process::ExitCode;

use clap::Parser;
use orbits_cli::cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(status) => status.into(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
