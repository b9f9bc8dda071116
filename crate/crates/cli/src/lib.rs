//! Library side of `forgectl`: argument types, the subcommands, graymap
//! rendering and the reproducibility stamp.

pub mod args;
pub mod commands;
mod config;
mod error;
pub mod output;
pub mod render;

use std::ffi::OsString;

use clap::Parser;

pub use args::{Cli, Command};
pub use config::merge_config;
pub use error::CliError;

const SUBCOMMANDS: [&str; 7] = ["simulate", "gen-dataset", "train", "eval", "predict", "mpc-run", "render"];

/// Parses `argv`, folding in the `--config` file when one is given.
pub fn parse(argv: Vec<OsString>) -> Result<Cli, clap::Error> {
    let config = argv.iter().enumerate().find_map(|(i, a)| {
        let s = a.to_str()?;
        if s == "--config" {
            argv.get(i + 1).cloned()
        } else {
            s.strip_prefix("--config=").map(OsString::from)
        }
    });
    let sub = argv.iter().skip(1).find_map(|a| SUBCOMMANDS.iter().find(|s| a.to_str() == Some(**s)));
    match (config, sub) {
        (Some(path), Some(sub)) => match merge_config(&argv, path.as_ref(), sub) {
            Ok(merged) => Cli::try_parse_from(merged),
            Err(e) => Err(clap::Error::raw(clap::error::ErrorKind::Io, format!("{}\n", e.to_json()))),
        },
        _ => Cli::try_parse_from(argv),
    }
}

/// Runs one subcommand, printing its result to stdout.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Simulate(a) => {
            let s = commands::simulate(a)?;
            println!("{}", serde_json::to_string_pretty(&s)?);
        }
        Command::GenDataset(a) => {
            let ds = commands::gen_dataset(a)?;
            println!(
                "{} runs, {} pairs, sha256 {}",
                ds.manifest.run_count, ds.manifest.record_count, ds.manifest.data_sha256
            );
        }
        Command::Train(a) => {
            let curve = commands::train(a)?;
            match curve.epochs.last() {
                Some(last) => println!("trained {} epochs, final train MAE {:.5}", curve.epochs.len(), last.train_mae),
                None => println!("no epochs run; untrained model written"),
            }
        }
        Command::Eval(a) => println!("{}", commands::eval(a)?),
        Command::Predict(a) => {
            let csv = commands::predict(a)?;
            if a.out.is_none() {
                print!("{csv}");
            }
        }
        Command::MpcRun(a) => {
            let run = commands::mpc_run(a)?;
            for s in &run.stages {
                println!(
                    "stage {}: waits {:?}, J {:.2}, predicted violations {}, {} evaluations, {:.2}s",
                    s.stage,
                    s.controls.waits(),
                    s.objective,
                    s.predicted_violations,
                    s.evaluations,
                    s.wall_clock_s
                );
            }
            let v = &run.verification;
            println!(
                "oracle: {} of {} region nodes above threshold ({})",
                v.violations,
                v.region_nodes,
                if v.feasible { "feasible" } else { "infeasible" }
            );
        }
        Command::Render(a) => println!("{}", serde_json::to_string_pretty(&commands::render(a)?)?),
    }
    Ok(())
}
