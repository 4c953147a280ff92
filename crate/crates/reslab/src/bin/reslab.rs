use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use reslab::cli::{run, Cli};
use reslab::exec::ParallelExecutor;
use reslab::format::write_atomic;
use reslab::AppError;

fn execute(cli: &Cli) -> Result<i32, AppError> {
    let exec = ParallelExecutor::from_env()?;
    let outcome = run(&cli.command, &exec)?;
    for (path, bytes) in &outcome.files {
        write_atomic(path, bytes)?;
    }
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(&outcome.stdout).and_then(|_| stdout.flush()).map_err(|e| AppError::io("<stdout>", e))?;
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
