//! `record-walk`: evaluate formulas, run the series engine, simulate walks and
//! analyze price data. Every run writes a table plus a manifest of the fully
//! resolved parameters.
//!
//! Exit codes: 0 success, 2 usage error, 1 runtime or data error.
//! `RECORD_WALK_THREADS` caps the worker count.

mod analyze;
mod args;
mod output;
mod series_cmd;
mod simulate;
mod theory;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use thiserror::Error;

use record_walk::analytic::AnalyticError;
use record_walk::findata::DataError;
use record_walk::montecarlo::SimError;
use record_walk::series::SeriesError;

use args::{Cli, Command};
use output::{RunManifest, Table};

const THREADS_VAR: &str = "RECORD_WALK_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("writing output: {0}")]
    Io(#[from] io::Error),
    #[error("writing output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            // the parameter checks in the library all trace back to flags
            CliError::Usage(_) | CliError::Analytic(_) | CliError::Series(_) | CliError::Sim(_) => 2,
            CliError::Data(_) | CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))),
        },
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

fn params_of(args: &impl Serialize) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let threads = threads_from_env()?;
    let started = now();
    let (subcommand, params, seed, table): (_, _, _, Table) = record_walk::with_threads(threads, || {
        Ok::<_, CliError>(match &cli.command {
            Command::Theory(a) => ("theory", params_of(a), None, theory::run(a)?),
            Command::Series(a) => ("series", params_of(a), None, series_cmd::run(a)?),
            Command::Simulate(a) => ("simulate", params_of(a), Some(a.seed), simulate::run(a)?),
            Command::Analyze(a) => {
                let seed = a.synthetic.is_some().then_some(a.seed);
                ("analyze", params_of(a), seed, analyze::run(a)?)
            }
        })
    })?;
    let manifest = RunManifest {
        subcommand,
        params,
        seed,
        version: env!("CARGO_PKG_VERSION"),
        started,
        finished: now(),
        results: table.results.clone(),
    };
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    if cli.json {
        output::write_json(&mut out, &manifest, &table)?;
    } else {
        output::write_csv(&mut out, &manifest, &table)?;
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
