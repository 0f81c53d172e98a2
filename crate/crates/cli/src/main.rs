mod commands;
mod config;
mod report;

use clap::Parser;
use config::{Cli, RunConfig};
use std::process::ExitCode;

const USAGE_EXIT: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = match RunConfig::resolve(cli.command, &cli.opts) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("bisphere: {e}");
            return ExitCode::from(USAGE_EXIT);
        }
    };
    let report = match commands::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("bisphere: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let text = report.render(&cfg);
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("bisphere: cannot write {}: {e}", path.display());
                return ExitCode::from(USAGE_EXIT);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.status.exit_code())
}
