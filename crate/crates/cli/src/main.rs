mod args;
mod run;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::RunConfig;
use crate::run::{run, CliError};

fn fail(err: &CliError, status: u8) -> ExitCode {
    eprintln!("{err}");
    ExitCode::from(status)
}

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let message = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .collect::<Vec<_>>()
                .join(" ");
            let message = message
                .strip_prefix("error: ")
                .unwrap_or(&message)
                .to_string();
            return fail(
                &CliError {
                    code: "usage",
                    message,
                },
                2,
            );
        }
    };

    let outcome = match run(&config) {
        Ok(o) => o,
        Err(e) => return fail(&e, 1),
    };

    let written = match &config.output {
        Some(path) => fs::write(path, &outcome.body).map_err(|e| CliError {
            code: "io",
            message: format!("{}: {e}", path.display()),
        }),
        None => io::stdout().write_all(&outcome.body).map_err(|e| CliError {
            code: "io",
            message: e.to_string(),
        }),
    };
    if let Err(e) = written {
        return fail(&e, 1);
    }

    for e in &outcome.row_errors {
        eprintln!("{e}");
    }
    if outcome.row_errors.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
