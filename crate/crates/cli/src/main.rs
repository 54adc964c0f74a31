mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, UsageError};

const EXIT_RUNTIME: u8 = 1;
const EXIT_USAGE: u8 = 2;

enum Failure {
    Usage(UsageError),
    Runtime(anyhow::Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    // Every resolve_* call validates the full configuration before any solve.
    match cli.command {
        Command::Solve(args) => {
            let (run, _) = config::resolve_common(&args.common)?;
            commands::cmd_solve(&run)?;
        }
        Command::Convergence(args) => commands::cmd_convergence(&config::resolve_convergence(&args)?)?,
        Command::Residual(args) => commands::cmd_residual(&config::resolve_residual(&args)?)?,
        Command::Trace(args) => commands::cmd_trace(&config::resolve_trace(&args)?)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with code 2 on its own parse errors.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            eprintln!("run 'hma --help' for usage");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
