mod commands;
mod config;
mod error;
mod render;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, RunConfig};
use error::CliError;

fn run(mut cli: Cli) -> Result<(), CliError> {
    cli.common.merge_config_file()?;
    let cfg = RunConfig::resolve(&cli.common)?;
    let (name, outcome) = match &cli.command {
        Command::Table => ("table", commands::table(&cfg)?),
        Command::Synthesize => ("synthesize", commands::synthesize(&cfg)?),
        Command::Validate(args) => ("validate", commands::validate(&cfg, args)?),
        Command::Sensitivity => ("sensitivity", commands::sensitivity_sweep(&cfg)?),
        Command::Magic => ("magic", commands::magic(&cfg)?),
        Command::Rabi(args) => ("rabi", commands::rabi(&cfg, args)?),
    };
    let text = outcome.report.render(cfg.format, cfg.to_json(name))?;
    match &cfg.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    match outcome.deferred {
        Some(err) => Err(err),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("ion-cnot: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
