mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers.filter(|n| *n > 0) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not size worker pool: {e}");
        }
    }
    let status = match cli.command {
        Command::Validate(a) => commands::validate(&a),
        Command::Gap(a) => commands::gap(&a),
        Command::Groundstate(a) => commands::groundstate(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Estimate(a) => commands::estimate(&a),
        Command::PaperRepro(a) => commands::repro(&a),
    };
    match status {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
