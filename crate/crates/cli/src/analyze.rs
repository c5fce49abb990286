use record_walk::findata::{self, EnsembleRecordReport, PriceSeries, SigmaMode, SyntheticSpec};

use crate::args::{AnalyzeArgs, AnalyzeEmit, SigmaModeArg};
use crate::output::Table;
use crate::CliError;

pub fn run(args: &AnalyzeArgs) -> Result<Table, CliError> {
    let series = load(args)?;
    let mode = match args.sigma_mode {
        SigmaModeArg::Raw => SigmaMode::Raw,
        SigmaModeArg::Detrended => SigmaMode::Detrended,
    };
    match args.emit {
        AnalyzeEmit::RawRecords => Ok(records_table(&findata::detrended_record_counts(&series)?.raw)),
        AnalyzeEmit::DetrendedRecords => Ok(records_table(&findata::detrended_record_counts(&series)?.detrended)),
        AnalyzeEmit::Windowed => {
            let window_len = args.window_len.expect("clap requires --window-len with --emit windowed");
            Ok(records_table(&findata::windowed_analysis(&series, window_len)?))
        }
        AnalyzeEmit::DriftSummary => {
            let summary = findata::normalized_drift_average(&findata::fit_all(&series, mode)?)?;
            let mut t = Table::new(&["mean_c_over_sigma", "std_error", "n_used", "n_degenerate"]);
            t.push(vec![
                summary.mean.into(),
                summary.std_error.into(),
                summary.n_used.into(),
                summary.n_degenerate.into(),
            ]);
            t.result("mean_c_over_sigma", summary.mean);
            t.result("std_error", summary.std_error);
            Ok(t)
        }
        AnalyzeEmit::Fits => {
            let fits = findata::fit_all(&series, mode)?;
            let mut t = Table::new(&["ticker", "n_prices", "c_hat", "sigma_hat", "c_over_sigma"]);
            for (s, fit) in series.iter().zip(&fits) {
                t.push(vec![
                    s.ticker().into(),
                    s.len().into(),
                    fit.c_hat.into(),
                    fit.sigma_hat.into(),
                    fit.normalized_drift().into(),
                ]);
            }
            Ok(t)
        }
    }
}

fn load(args: &AnalyzeArgs) -> Result<Vec<PriceSeries>, CliError> {
    if let Some(path) = &args.input {
        return Ok(findata::load_prices(path, args.min_rows)?);
    }
    let raw = args.synthetic.as_deref().expect("clap requires --input or --synthetic");
    let parse_count = |s: &str, what: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError::Usage(format!("--synthetic {what} must be a non-negative integer, got {s:?}")))
    };
    let n_tickers = parse_count(&raw[0], "N_TICKERS")?;
    let n_steps = parse_count(&raw[1], "N_STEPS")?;
    let mean_ratio: f64 = raw[2]
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| CliError::Usage(format!("--synthetic MEAN_C_OVER_SIGMA must be a number, got {:?}", raw[2])))?;
    if n_tickers == 0 {
        return Err(CliError::Usage("--synthetic needs at least one ticker".into()));
    }
    Ok(findata::generate_synthetic(&SyntheticSpec::new(n_tickers, n_steps, mean_ratio, args.seed))?)
}

fn records_table(report: &EnsembleRecordReport) -> Table {
    let mut t = Table::new(&["n", "mean_upper", "mean_lower"]);
    for (n, (u, l)) in report.mean_upper.iter().zip(&report.mean_lower).enumerate() {
        t.push(vec![n.into(), (*u).into(), (*l).into()]);
    }
    t.result("n_tickers", report.n_tickers);
    t.result("n_sequences", report.n_sequences);
    t.result("horizon", report.horizon);
    t.result("final_upper", report.final_upper());
    t.result("final_lower", report.final_lower());
    t
}
