mod args;
mod commands;

use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, Parser};

use args::{Cli, Command};
use commands::CliError;

fn run(cli: &Cli, argv: &[String]) -> Result<(), CliError> {
    if let Some(path) = &cli.ledger {
        commands::write_ledger(path)?;
    }
    match &cli.command {
        Some(Command::Extremal(a)) => commands::extremal(a, argv),
        Some(Command::Verify(a)) => commands::verify(a, argv),
        Some(Command::Reach(a)) => commands::reach(a, argv),
        Some(Command::Distance(a)) => commands::distance(a, argv),
        None if cli.ledger.is_some() => Ok(()),
        None => Err(CliError::Usage(Cli::command().render_usage().to_string())),
    }
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let result = run(&cli, &argv);
    if cli.timing {
        eprintln!("wall-clock: {:.6} s", started.elapsed().as_secs_f64());
    }
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
