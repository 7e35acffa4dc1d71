//! Command-line front end for `eqtree`: solve, exact, experiment, gen,
//! verify and measure.
//!
//! Exit codes are part of the interface: 0 when a verified coloring (or a
//! successful result) was written, 1 when a report was written instead
//! (stuck state, UNSAT, exhausted budget, failed verification), 2 on I/O,
//! parse or parameter errors.

pub mod args;
pub mod commands;
pub mod experiment;
pub mod input;

use std::fs;
use std::io::Write;

use anyhow::{Context, Result};

use args::{Command, ExperimentArgs};
use commands::Exit;
use experiment::ExperimentConfig;

pub fn experiment_cmd(args: &ExperimentArgs, stdout: &mut dyn Write) -> Result<Exit> {
    let text = fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut config =
        ExperimentConfig::from_json(&text).with_context(|| format!("parsing {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        config.seeds.start = seed;
    }
    if let Some(threads) = args.threads {
        config.threads = threads;
    }
    let out = args.out.clone().or_else(|| config.output.clone().map(Into::into));
    let summary = experiment::run_to_file(&config, out.as_deref(), stdout)?;
    eprintln!(
        "{} rows, {} successes, success rate {:.4}",
        summary.rows,
        summary.successes,
        summary.rate()
    );
    Ok(Exit::Ok)
}

/// Runs one parsed command.
pub fn run(command: &Command, stdout: &mut dyn Write) -> Result<Exit> {
    match command {
        Command::Solve(a) => commands::solve(a, stdout),
        Command::Exact(a) => commands::exact(a, stdout),
        Command::Experiment(a) => experiment_cmd(a, stdout),
        Command::Gen(a) => commands::gen(a, stdout),
        Command::Verify(a) => commands::verify_cmd(a, stdout),
        Command::Measure(a) => commands::measure(a, stdout),
    }
}
