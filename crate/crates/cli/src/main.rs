use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

mod args;
mod commands;
mod report;
mod settings;

use args::{Cli, Command};
use commands::Ctx;
use report::{emit, exit_code, manifest, EXIT_ERROR};
use settings::Settings;

fn run(cli: Cli) -> Result<u8> {
    let settings = Settings::resolve(&cli)?;
    let ctx = Ctx::new(settings, cli.mutate)?;
    let result = match &cli.command {
        Command::Hydrogen(a) => commands::hydrogen::run(a, &ctx),
        Command::Sweep(a) => commands::sweep::run(a, &ctx),
        Command::Finite(a) => commands::finite::run(a, &ctx),
        Command::Holder(a) => commands::holder::run(a, &ctx),
        Command::Central(a) => commands::central::run(a, &ctx),
    }?;
    let code = exit_code(&result, ctx.settings.allow_divergent);
    let m = manifest(&result, &ctx.settings, ctx.units, code);
    emit(&result, &m, ctx.settings.format, cli.out.as_deref())?;
    for d in &result.divergent {
        eprintln!("divergent: {d}");
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
