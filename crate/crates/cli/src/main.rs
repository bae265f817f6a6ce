use std::process::ExitCode;

use clap::Parser;
use ucg_cli::{exit_code, render, run, Args, RunConfig};

fn main() -> ExitCode {
    let args = Args::parse();
    let config = match RunConfig::from_args(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let report = run(&config);
    let text = render(&report, config.format);
    match &config.output_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if let Some(failed) = report.first_failure() {
        eprintln!("check failed: {}", failed.name);
    }
    ExitCode::from(exit_code(&report) as u8)
}
