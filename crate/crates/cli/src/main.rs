use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gmdisc_cli::{execute, Cli, EXIT_INPUT_ERROR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not worth a panic
            let _ = out.write_all(outcome.stdout.as_bytes());
            let _ = out.flush();
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.code());
            ExitCode::from(EXIT_INPUT_ERROR)
        }
    }
}
