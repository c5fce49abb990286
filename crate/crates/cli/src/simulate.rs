use record_walk::analytic::{self, AsymptoticRate, DriftParams, RateForm, Side};
use record_walk::montecarlo::{self, JumpDist, SimConfig, SimEstimate};
use record_walk::series::{self, WalkSeries};

use crate::args::{DistArg, RecordKind, SimEmit, SimulateArgs};
use crate::output::{clamp_probability, Table};
use crate::CliError;

/// Longest walk that still gets a generating-function reference column;
/// the series cost grows with the square of the order.
pub const SERIES_REFERENCE_MAX_STEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Curve {
    Rate,
    Mean,
    Survival(Side),
}

pub fn run(args: &SimulateArgs) -> Result<Table, CliError> {
    let jump = match args.dist {
        DistArg::Gaussian => JumpDist::Gaussian,
        DistArg::Uniform => JumpDist::Uniform,
    };
    let steps = usize::try_from(args.steps).map_err(|_| CliError::Usage("--steps too large".into()))?;
    let cfg = SimConfig::new(jump, args.sigma, args.c, steps, args.reals, args.seed)?;
    let params = DriftParams::new(args.c, args.sigma)?;
    match args.emit {
        SimEmit::Scaling => scaling(&cfg, params),
        SimEmit::AsymptoticRate => asymptotic_rate(&cfg, params, args.tail),
        emit => {
            // lower records of the walk are upper records of the mirrored walk
            let (curve, reference_params) = match (emit, args.records) {
                (SimEmit::RecordRate, RecordKind::Upper) => (Curve::Rate, params),
                (SimEmit::RecordRate, RecordKind::Lower) => (Curve::Rate, flip(params)),
                (SimEmit::MeanRecords, RecordKind::Upper) => (Curve::Mean, params),
                (SimEmit::MeanRecords, RecordKind::Lower) => (Curve::Mean, flip(params)),
                (SimEmit::SurvivalPos, _) => (Curve::Survival(Side::Positive), params),
                (SimEmit::SurvivalNeg, _) => (Curve::Survival(Side::Negative), params),
                _ => unreachable!("handled above"),
            };
            let sim = montecarlo::simulate(&cfg)?;
            let estimates = match (curve, args.records) {
                (Curve::Rate, RecordKind::Upper) => &sim.records.upper_rate,
                (Curve::Rate, RecordKind::Lower) => &sim.records.lower_rate,
                (Curve::Mean, RecordKind::Upper) => &sim.records.mean_upper,
                (Curve::Mean, RecordKind::Lower) => &sim.records.mean_lower,
                (Curve::Survival(side), _) => sim.survival(side),
            };
            Ok(per_step(estimates, curve, reference_params, jump))
        }
    }
}

fn flip(p: DriftParams) -> DriftParams {
    DriftParams::new(-p.c(), p.sigma()).expect("negated drift stays finite")
}

fn per_step(estimates: &[SimEstimate], curve: Curve, params: DriftParams, jump: JumpDist) -> Table {
    let steps = estimates.len() - 1;
    let exact = (jump == JumpDist::Gaussian && steps <= SERIES_REFERENCE_MAX_STEPS).then(|| {
        let s = WalkSeries::gaussian(params, steps);
        match curve {
            Curve::Rate => s.record_rate,
            Curve::Mean => s.mean_records,
            Curve::Survival(side) => s.survival(side).clone(),
        }
    });
    let mut t = Table::new(&["n", "estimate", "std_error", "analytic", "series"]);
    for (n, est) in estimates.iter().enumerate() {
        let series_value = exact.as_ref().map(|s| match curve {
            Curve::Mean => s.coeff(n),
            _ => clamp_probability(s.coeff(n)),
        });
        t.push(vec![
            n.into(),
            est.value.into(),
            est.std_error.into(),
            analytic_reference(curve, n, params, jump).into(),
            series_value.into(),
        ]);
    }
    let last = estimates.last().expect("at least step 0");
    t.result("final_estimate", last.value);
    t.result("final_std_error", last.std_error);
    t
}

/// Closed form where one applies: exact for the symmetric walk, the
/// small-drift expansion below the asymptotic-rate switch point, and the
/// large-drift forms (Gaussian only) above it.
fn analytic_reference(curve: Curve, n: usize, params: DriftParams, jump: JumpDist) -> Option<f64> {
    if n == 0 {
        return Some(1.0);
    }
    let r = params.ratio();
    if r == 0.0 {
        return Some(match curve {
            Curve::Mean => analytic::mean_records_symmetric(n),
            _ => analytic::record_rate_symmetric(n),
        });
    }
    if r.abs() < AsymptoticRate::default().threshold() {
        return Some(match curve {
            Curve::Rate => analytic::record_rate_small_drift(n, params, RateForm::Arctan),
            Curve::Mean => analytic::mean_records_small_drift(n, params),
            Curve::Survival(side) => analytic::survival_small_drift(n, params, side),
        });
    }
    if jump != JumpDist::Gaussian {
        return None;
    }
    // a walk drifting down stays above its start like an upward walk stays below
    let up = DriftParams::new(params.c().abs(), params.sigma()).expect("finite");
    let toward_drift = analytic::asymptotic_rate_large_drift(r.abs());
    let against_drift = analytic::survival_large_drift(n, up).ok();
    match (curve, r > 0.0) {
        (Curve::Rate | Curve::Survival(Side::Positive), true) => Some(toward_drift),
        (Curve::Survival(Side::Negative), false) => Some(toward_drift),
        (Curve::Rate | Curve::Survival(Side::Positive), false) => against_drift,
        (Curve::Survival(Side::Negative), true) => against_drift,
        (Curve::Mean, true) => analytic::mean_records_large_drift(n, params).ok(),
        (Curve::Mean, false) => None,
    }
}

fn scaling(cfg: &SimConfig, params: DriftParams) -> Result<Table, CliError> {
    let points = montecarlo::estimate_scaling_function(&[cfg.drift], cfg)?;
    let exact = (cfg.jump == JumpDist::Gaussian && cfg.n_steps <= SERIES_REFERENCE_MAX_STEPS)
        .then(|| WalkSeries::gaussian(params, cfg.n_steps).record_rate);
    let r = params.ratio();
    let mut t = Table::new(&["n", "x", "g", "std_error", "small_x_limit", "large_x_limit", "series"]);
    for p in &points {
        let limits = analytic::scaling_function_limits(p.x);
        t.push(vec![
            p.n.into(),
            p.x.into(),
            p.g.into(),
            p.std_error.into(),
            limits.small_x.into(),
            limits.large_x.into(),
            exact.as_ref().map(|s| s.coeff(p.n) / r).into(),
        ]);
    }
    Ok(t)
}

fn asymptotic_rate(cfg: &SimConfig, params: DriftParams, tail: Option<u64>) -> Result<Table, CliError> {
    let tail = tail.map(|t| t as usize);
    let est = montecarlo::estimate_asymptotic_rate(cfg, tail)?;
    let n_tail = tail.unwrap_or(cfg.n_steps.div_ceil(2));
    let upward = params.c() > 0.0;
    let analytic_value = upward.then(|| analytic::asymptotic_record_rate(params).ok()).flatten();
    let limit = (upward && cfg.jump == JumpDist::Gaussian)
        .then(|| series::limiting_record_rate(params).ok())
        .flatten();
    let mut t = Table::new(&["c_over_sigma", "n_tail", "estimate", "std_error", "analytic", "series_limit"]);
    t.push(vec![
        params.ratio().into(),
        n_tail.into(),
        est.value.into(),
        est.std_error.into(),
        analytic_value.into(),
        limit.into(),
    ]);
    t.result("estimate", est.value);
    t.result("std_error", est.std_error);
    Ok(t)
}
