use record_walk::analytic::{self, AsymptoticRate, DriftParams, RateForm, Side};

use crate::args::{Quantity, RateFormArg, Regime, TheoryArgs};
use crate::output::Table;
use crate::CliError;

pub fn run(args: &TheoryArgs) -> Result<Table, CliError> {
    let params = DriftParams::new(args.c, args.sigma)?;
    let side = args.side.into();
    match args.quantity {
        Quantity::AsymptoticRate => return asymptotic_rate(args, params),
        Quantity::Crossover => {
            let mut t = Table::new(&["c_over_sigma", "n_star"]);
            t.push(vec![params.ratio().into(), analytic::crossover_time(params)?.into()]);
            return Ok(t);
        }
        _ => {}
    }
    let regime = args.regime.unwrap_or(Regime::Symmetric);
    if regime == Regime::Symmetric && args.c != 0.0 {
        return Err(CliError::Usage("the symmetric regime needs --c 0".into()));
    }
    let form = match args.rate_form {
        RateFormArg::Arctan => RateForm::Arctan,
        RateFormArg::LargeN => RateForm::LargeN,
    };
    let eval = |n: usize| -> Result<f64, CliError> {
        Ok(match (args.quantity, regime) {
            (Quantity::RecordRate | Quantity::Survival, Regime::Symmetric) => analytic::record_rate_symmetric(n),
            (Quantity::MeanRecords, Regime::Symmetric) => analytic::mean_records_symmetric(n),
            (Quantity::FirstPassage, Regime::Symmetric) => {
                analytic::record_rate_symmetric(n - 1) - analytic::record_rate_symmetric(n)
            }
            (Quantity::RecordRate, Regime::SmallDrift) => analytic::record_rate_small_drift(n, params, form),
            (Quantity::MeanRecords, Regime::SmallDrift) => analytic::mean_records_small_drift(n, params),
            (Quantity::Survival, Regime::SmallDrift) => analytic::survival_small_drift(n, params, side),
            (Quantity::FirstPassage, Regime::SmallDrift) => analytic::first_passage_small_drift(n, params, side),
            (Quantity::RecordRate, Regime::LargeDrift) => large_rate(params)?,
            (Quantity::MeanRecords, Regime::LargeDrift) => analytic::mean_records_large_drift(n, params)?,
            (Quantity::Survival, Regime::LargeDrift) => match side {
                Side::Positive => large_rate(params)?,
                Side::Negative => analytic::survival_large_drift(n, params)?,
            },
            (Quantity::FirstPassage, Regime::LargeDrift) => {
                return Err(CliError::Usage("no large-drift first-passage expression".into()))
            }
            (Quantity::AsymptoticRate | Quantity::Crossover, _) => unreachable!("handled above"),
        })
    };
    // n = 0 is outside the small-n-singular forms; start at 1 there
    let first = match (args.quantity, regime) {
        (Quantity::MeanRecords, _) => 0,
        (Quantity::RecordRate | Quantity::Survival, Regime::Symmetric) => 0,
        _ => 1,
    };
    let mut t = Table::new(&["n", "value"]);
    for n in first..=args.n_max {
        t.push(vec![n.into(), eval(n)?.into()]);
    }
    Ok(t)
}

fn large_rate(params: DriftParams) -> Result<f64, CliError> {
    if params.c() <= 0.0 {
        return Err(analytic::AnalyticError::NonPositiveDrift(params.c()).into());
    }
    Ok(analytic::asymptotic_rate_large_drift(params.ratio()))
}

fn asymptotic_rate(args: &TheoryArgs, params: DriftParams) -> Result<Table, CliError> {
    let rate = AsymptoticRate::with_slope(args.rate_slope);
    let r = params.ratio();
    if params.c() <= 0.0 {
        return Err(analytic::AnalyticError::NonPositiveDrift(params.c()).into());
    }
    let (value, branch) = match args.regime {
        Some(Regime::SmallDrift) => (rate.small_drift_branch(r), "small-drift"),
        Some(Regime::LargeDrift) => (rate.large_drift_branch(r), "large-drift"),
        Some(Regime::Symmetric) => return Err(CliError::Usage("the symmetric walk has no positive record rate".into())),
        None if r < rate.threshold() => (rate.small_drift_branch(r), "small-drift"),
        None => (rate.large_drift_branch(r), "large-drift"),
    };
    let mut t = Table::new(&["c_over_sigma", "value", "branch", "threshold"]);
    t.push(vec![r.into(), value.into(), branch.into(), rate.threshold().into()]);
    Ok(t)
}
