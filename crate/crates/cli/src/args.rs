use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "record-walk", version, about = "Record statistics of random walks with drift")]
pub struct Cli {
    /// Write records-of-objects JSON instead of CSV.
    #[arg(long, global = true)]
    pub json: bool,

    /// Output file (default: stdout).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate closed-form and asymptotic expressions.
    Theory(TheoryArgs),
    /// Exact coefficients from the generating functions (Gaussian jumps).
    Series(SeriesArgs),
    /// Monte Carlo estimates with reference columns.
    Simulate(SimulateArgs),
    /// Record counts and drift fits for daily price data.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    RecordRate,
    MeanRecords,
    Survival,
    FirstPassage,
    AsymptoticRate,
    Crossover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Symmetric,
    SmallDrift,
    LargeDrift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideArg {
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateFormArg {
    Arctan,
    LargeN,
}

#[derive(Debug, Args, Serialize)]
pub struct TheoryArgs {
    #[arg(long, value_enum)]
    pub quantity: Quantity,
    /// Defaults to `symmetric`; for `asymptotic-rate`, omitting it picks the branch by drift.
    #[arg(long, value_enum)]
    pub regime: Option<Regime>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 100)]
    pub n_max: usize,
    /// Side for `survival` and `first-passage`.
    #[arg(long, value_enum, default_value_t = SideArg::Positive)]
    pub side: SideArg,
    /// Small-drift record-rate correction.
    #[arg(long, value_enum, default_value_t = RateFormArg::Arctan)]
    pub rate_form: RateFormArg,
    /// Slope of the small-drift asymptotic rate.
    #[arg(long, default_value_t = record_walk::analytic::SMALL_DRIFT_RATE_SLOPE)]
    pub rate_slope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesEmit {
    /// Survival probabilities.
    Q,
    /// First-passage probabilities.
    F,
    /// Distribution of the number of records, `Pi(m, n)` for fixed `m`.
    Pi,
    /// Mean number of records.
    Mean,
    /// Record rate.
    Rate,
}

#[derive(Debug, Args, Serialize)]
pub struct SeriesArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = record_walk::series::DEFAULT_ORDER)]
    pub order: usize,
    #[arg(long, value_enum)]
    pub emit: SeriesEmit,
    /// Record number for `--emit pi`.
    #[arg(long, required_if_eq("emit", "pi"), value_parser = clap::value_parser!(u64).range(1..))]
    pub m: Option<u64>,
    /// Side for `q` and `f`.
    #[arg(long, value_enum, default_value_t = SideArg::Positive)]
    pub side: SideArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistArg {
    Gaussian,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimEmit {
    RecordRate,
    MeanRecords,
    SurvivalPos,
    SurvivalNeg,
    Scaling,
    AsymptoticRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordKind {
    Upper,
    Lower,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = DistArg::Gaussian)]
    pub dist: DistArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub steps: u64,
    #[arg(long, default_value_t = record_walk::montecarlo::DEFAULT_REALIZATIONS, value_parser = clap::value_parser!(u64).range(1..))]
    pub reals: u64,
    #[arg(long, default_value_t = record_walk::montecarlo::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub emit: SimEmit,
    /// Which records `record-rate` and `mean-records` count.
    #[arg(long, value_enum, default_value_t = RecordKind::Upper)]
    pub records: RecordKind,
    /// Steps averaged by `asymptotic-rate` (default: the last half).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub tail: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnalyzeEmit {
    RawRecords,
    DetrendedRecords,
    Windowed,
    DriftSummary,
    /// Per-ticker drift and volatility fits.
    Fits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SigmaModeArg {
    Raw,
    Detrended,
}

#[derive(Debug, Args, Serialize)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["input", "synthetic"]))]
pub struct AnalyzeArgs {
    /// CSV with columns ticker,date,close.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Generate a synthetic ensemble instead of reading a file.
    #[arg(long, num_args = 3, value_names = ["N_TICKERS", "N_STEPS", "MEAN_C_OVER_SIGMA"])]
    pub synthetic: Option<Vec<String>>,
    #[arg(long, default_value_t = record_walk::montecarlo::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub emit: AnalyzeEmit,
    #[arg(long, required_if_eq("emit", "windowed"))]
    pub window_len: Option<usize>,
    #[arg(long, value_enum, default_value_t = SigmaModeArg::Detrended)]
    pub sigma_mode: SigmaModeArg,
    /// Tickers with fewer prices are skipped.
    #[arg(long, default_value_t = 3)]
    pub min_rows: usize,
}

impl From<SideArg> for record_walk::Side {
    fn from(s: SideArg) -> Self {
        match s {
            SideArg::Positive => record_walk::Side::Positive,
            SideArg::Negative => record_walk::Side::Negative,
        }
    }
}
