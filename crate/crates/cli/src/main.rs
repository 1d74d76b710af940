mod cli;
mod commands;
mod config;
mod error;
mod input;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use cli::Cli;
use config::Config;
use error::CliError;

fn fail(err: &CliError, command: Option<&str>) -> ExitCode {
    let _ = writeln!(std::io::stderr(), "{}", err.to_json(command));
    ExitCode::from(err.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return fail(&CliError::Usage(first.to_string()), None);
        }
    };
    let name = cli.command.name();
    let result = Config::load(&cli).and_then(|cfg| {
        let report = commands::run(&cli.command, &cfg, &mut std::io::stdin().lock())?;
        let mut out = Vec::new();
        report.write(cfg.format, name, &mut out)?;
        std::io::stdout().write_all(&out)?;
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e, Some(name)),
    }
}
