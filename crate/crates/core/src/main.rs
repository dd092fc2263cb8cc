use std::process::ExitCode;

use clap::Parser;
use constacode::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        constacode::cli::Command::Table(a) | constacode::cli::Command::Verify(a) | constacode::cli::Command::Witness(a) => {
            a.out.clone()
        }
    };
    match run(cli) {
        Ok(outcome) => {
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &outcome.text) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", outcome.text),
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
