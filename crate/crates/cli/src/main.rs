use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dgres_cli::{run, Cli, Status};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(Status::InvalidInput.code() as u8) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = run(&cli);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.text),
        None => std::io::stdout().write_all(outcome.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("dgres: cannot write report: {e}");
        return ExitCode::from(Status::InvalidInput.code() as u8);
    }
    ExitCode::from(outcome.status.code() as u8)
}
