use std::io;
use std::process::ExitCode;

use clap::Parser;
use eqtree_cli::args::Cli;
use eqtree_cli::commands::Exit;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Exit::Error as u8),
            };
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match eqtree_cli::run(&cli.command, &mut lock) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Exit::Error as u8)
        }
    }
}
