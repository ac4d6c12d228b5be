use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use cduality::args::Cli;
use cduality::{run, RunError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match cli.into_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("usage error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(outcome) => {
            // A closed stdout (e.g. piped into `head`) is not a run failure.
            let mut stdout = std::io::stdout().lock();
            let _ = write!(stdout, "{}", outcome.summary);
            let _ = writeln!(
                stdout,
                "{} artifacts in {} (see {})",
                outcome.artifacts.len(),
                config.output_dir.display(),
                cduality::MANIFEST
            );
            if outcome.checks_passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("{}: check failed", outcome.command.name());
                ExitCode::from(3)
            }
        }
        Err(RunError::Config(e)) => {
            eprintln!("usage error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {:#}", anyhow::Error::from(e));
            ExitCode::FAILURE
        }
    }
}
