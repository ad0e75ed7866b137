use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{ColorChoice, CommandFactory, FromArgMatches};

mod args;
mod commands;

use args::Cli;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Engine(#[from] polychain::Error),
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("verification failed")]
    Mismatch,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch => 1,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let mut command = Cli::command();
    if std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty()) {
        command = command.color(ColorChoice::Never);
    }
    let cli = match Cli::from_arg_matches(&command.get_matches()) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };

    let result = (|| -> Result<(), CliError> {
        let sink: Box<dyn Write> = match &cli.out {
            Some(path) => Box::new(File::create(path)?),
            None => Box::new(io::stdout().lock()),
        };
        let mut out = BufWriter::new(sink);
        let outcome = commands::run(&cli, &mut out);
        out.flush()?;
        outcome
    })();

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
