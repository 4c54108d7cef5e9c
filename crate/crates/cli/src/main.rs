use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use decompq_cli::args::Cli;
use decompq_cli::{commands, Status};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Status::Success.into(),
                _ => Status::Usage.into(),
            };
        }
    };
    let mut stdout = io::stdout().lock();
    let status = match commands::run(cli.command, &mut stdout) {
        Ok(s) => s,
        Err(e) => {
            let _ = stdout.flush();
            eprintln!("error: {e}");
            e.status()
        }
    };
    status.into()
}
