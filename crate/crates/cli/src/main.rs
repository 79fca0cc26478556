mod args;
mod commands;
mod error;
mod serve;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { scene } => commands::validate(&scene),
        Command::Snapshot(a) => commands::snapshot(&a),
        Command::Bake(a) => commands::bake(&a),
        Command::Bundle { scene, out } => commands::bundle(&scene, &out),
        Command::Goldens { scene, out, count } => commands::goldens(&scene, &out, count),
        Command::Serve { scene, port, host, assets } => serve::serve(&scene, &host, port, assets),
        Command::Demo { kind } => commands::demo(&kind),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FLYMATION_LOG", "info"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
