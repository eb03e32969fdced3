//! `tmdyn`: command-line front end for tmdyn-core.
//!
//! Exit status is 0 on success, 1 when an analysis fails (oracle mismatch,
//! conjugacy counterexample, exhausted budget) and 2 on usage or parse
//! errors.

mod args;
mod commands;
mod source;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Context;

/// Bad flags, an unknown machine or an unreadable description.
#[derive(Debug)]
pub struct UsageError(pub String);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (machine, info) = match source::load(cli.machine.as_deref(), cli.file.as_deref()) {
        Ok(loaded) => loaded,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let machine = machine.with_halting_mode(cli.halting_mode.into());
    let cx = Context { machine: &machine, info: &info, json: cli.json, seed: cli.seed };
    let result = match &cli.command {
        Command::Analyze(a) => commands::analyze(&cx, a),
        Command::Graph(a) => Ok(commands::graph(&cx, a)),
        Command::Entropy(a) => commands::entropy(&cx, a),
        Command::Simulate(a) => commands::simulate(&cx, a),
        Command::Gshift(a) => Ok(commands::gshift(&cx, a)),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            let _ = stdout.flush();
            match out.failure {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
