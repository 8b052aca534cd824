use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use fermient_cli::commands::run;
use fermient_cli::{Cli, Failure, FailureKind};

fn emit(body: &str, out: Option<&std::path::Path>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| Failure::io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(FailureKind::Parse.exit_code() as u8),
            };
        }
    };
    let result = run(&cli.command, &cli.common).and_then(|report| {
        emit(&report.body, cli.common.out.as_deref())?;
        if let Some(t) = report.wall_time {
            eprintln!("wall time: {t:.3} s");
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
