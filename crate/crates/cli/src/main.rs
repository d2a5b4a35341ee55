//! `tempjump`: jump coefficients, the comparison table and wall profiles.
//!
//! Exit codes: 0 success, 2 configuration error, 3 oracle divergence,
//! 4 i/o error.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{run_point, run_profile, run_table, CliError};
use config::{CommonArgs, RunConfig};
use output::{emit, num, render};

#[derive(Debug, Parser)]
#[command(
    name = "tempjump",
    version,
    about = "Temperature and concentration jump coefficients"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Jump coefficients for one accommodation coefficient.
    Point,
    /// Coefficients per unit gradient for several q, next to reference values.
    Table {
        /// Comma-separated q values; defaults to the reference set.
        #[arg(long = "q-list", value_delimiter = ',')]
        q_list: Vec<f64>,
    },
    /// Density and temperature perturbations away from the wall.
    Profile {
        #[arg(long = "x-max", default_value_t = 20.0)]
        x_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.common).map_err(|e| CliError::Config(e.0))?;
    let (report, extra) = match &cli.command {
        Command::Point => (run_point(&cfg)?, json!({})),
        Command::Table { q_list } => {
            let report = run_table(&cfg, q_list)?;
            let listed: Vec<_> = report
                .table
                .rows
                .iter()
                .map(|r| match r[0] {
                    output::Cell::Num(q) => num(q),
                    _ => serde_json::Value::Null,
                })
                .collect();
            (report, json!({ "q_list": listed }))
        }
        Command::Profile { x_max, points } => (
            run_profile(&cfg, *x_max, *points)?,
            json!({ "x_max": num(*x_max), "points": points }),
        ),
    };
    let bytes = render(&cfg, &report, extra).map_err(|e| CliError::Io(e.to_string()))?;
    emit(&bytes, cfg.out.as_deref()).map_err(|e| CliError::Io(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tempjump: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
