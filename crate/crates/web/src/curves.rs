//! The computations behind the demo, in plain Rust.

use record_walk::analytic::{self, AnalyticError, DriftParams, RateForm};
use record_walk::montecarlo::{self, JumpDist, SimConfig, SimError};
use record_walk::series::WalkSeries;

/// Caps that keep a click in the browser under a second or two.
pub const MAX_ORDER: usize = 4000;
pub const MAX_WALK_STEPS: u64 = 20_000_000;

#[derive(Debug, PartialEq, thiserror::Error)]
pub enum DemoError {
    #[error(transparent)]
    Param(#[from] AnalyticError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{0} too large for the demo")]
    TooLarge(&'static str),
}

fn params(c_over_sigma: f64) -> Result<DriftParams, DemoError> {
    Ok(DriftParams::new(c_over_sigma, 1.0)?)
}

fn check_order(n: usize) -> Result<(), DemoError> {
    if n > MAX_ORDER {
        return Err(DemoError::TooLarge("order"));
    }
    Ok(())
}

pub fn exact_record_rate(c_over_sigma: f64, n_max: usize) -> Result<Vec<f64>, DemoError> {
    check_order(n_max)?;
    Ok(WalkSeries::gaussian(params(c_over_sigma)?, n_max).record_rate.into_coeffs())
}

pub fn approx_record_rate(c_over_sigma: f64, n_max: usize) -> Result<Vec<f64>, DemoError> {
    let p = params(c_over_sigma)?;
    Ok((0..=n_max)
        .map(|n| {
            if n == 0 {
                f64::NAN
            } else {
                analytic::record_rate_small_drift(n, p, RateForm::Arctan)
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateEstimate {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
}

pub fn simulate_record_rate(
    c_over_sigma: f64,
    n_steps: usize,
    walks: u64,
    seed: u64,
    uniform: bool,
) -> Result<RateEstimate, DemoError> {
    if (n_steps as u64).saturating_mul(walks) > MAX_WALK_STEPS {
        return Err(DemoError::TooLarge("steps x walks"));
    }
    let jump = if uniform { JumpDist::Uniform } else { JumpDist::Gaussian };
    let cfg = SimConfig::new(jump, 1.0, c_over_sigma, n_steps, walks, seed)?;
    let rate = montecarlo::simulate_record_stats(&cfg)?.upper_rate;
    Ok(RateEstimate {
        values: rate.iter().map(|e| e.value).collect(),
        errors: rate.iter().map(|e| e.std_error).collect(),
    })
}

pub fn record_number_distribution(c_over_sigma: f64, n: usize) -> Result<Vec<f64>, DemoError> {
    check_order(n)?;
    let s = WalkSeries::gaussian(params(c_over_sigma)?, n);
    Ok(s.record_distributions().take(n + 1).map(|pi| pi.coeff(n).max(0.0)).collect())
}
