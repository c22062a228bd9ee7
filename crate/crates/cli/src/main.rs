use std::process::ExitCode;

use clap::Parser;

use bosesemi_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = bosesemi_cli::configure_threads().and_then(|()| bosesemi_cli::execute(&cli.command));
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
