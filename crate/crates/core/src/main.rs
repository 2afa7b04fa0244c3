use std::process::ExitCode;

use clap::Parser;
use ring_dispersion::cli::{execute, Cli, EXIT_ERROR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
