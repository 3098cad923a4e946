use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;
use darts_cli::commands::{self, Cli, EXIT_USAGE, SUBCOMMANDS};
use darts_cli::{config, output};

fn with_config(mut args: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    if let Some(path) = config::take_config_flag(&mut args)? {
        let entries = config::read(path.as_ref())?;
        config::splice(&mut args, &SUBCOMMANDS, &entries);
    }
    Ok(args)
}

fn main() -> ExitCode {
    let args = match with_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("darts: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let shown: Vec<String> = std::iter::once("darts".to_string()).chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned())).collect();
    match commands::run(&cli, &output::command_line(&shown)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("darts: {e:#}");
            ExitCode::from(commands::error_code(&e))
        }
    }
}
