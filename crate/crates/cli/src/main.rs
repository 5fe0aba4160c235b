use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use derand_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match execute(&cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => {
            std::fs::write(path, &outcome.report).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => std::io::stdout()
            .write_all(outcome.report.as_bytes())
            .map_err(|e| e.to_string()),
    };
    let written = written.and_then(|()| {
        outcome.files.iter().try_for_each(|(path, contents)| {
            std::fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
        })
    });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    eprint!("{}", outcome.summary);
    ExitCode::from(outcome.status.code())
}
