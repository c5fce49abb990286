//! Monte Carlo estimation of record statistics for drifted random walks.
//!
//! # Reproducibility
//!
//! Realization `i` of a run draws its jumps from a ChaCha8 stream keyed by
//! the run seed, with the stream id set to `i`:
//!
//! ```text
//! rng = ChaCha8Rng::seed_from_u64(seed); rng.set_stream(i)
//! ```
//!
//! Realizations are grouped into fixed blocks of [`BLOCK_SIZE`], each worker
//! accumulates integer counters, and counters are merged by addition. Integer
//! addition is associative, so the estimates are bit-identical for any number
//! of worker threads. Divisions happen once, after the merge.
//!
//! Nothing proportional to the full path is stored. Record events, deaths of
//! the survival condition and window counts are sparse per-step counters, and
//! cumulative quantities are rebuilt from prefix sums.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::Side;

/// Realizations per work unit.
pub const BLOCK_SIZE: u64 = 1024;
pub const DEFAULT_REALIZATIONS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("sigma must be positive and finite, got {0}")]
    BadSigma(f64),
    #[error("drift must be finite, got {0}")]
    BadDrift(f64),
    #[error("need at least one step")]
    NoSteps,
    #[error("need at least one realization")]
    NoRealizations,
    #[error("tail length {tail} must be in 1..={steps}")]
    BadTail { tail: usize, steps: usize },
    #[error("drift must be non-zero to define x = (c/sigma)^2 n")]
    ZeroDrift,
    #[error("invalid x bin [{lo}, {hi}]")]
    BadBin { lo: f64, hi: f64 },
    #[error("x bin [{lo}, {hi}] contains no integer step for c = {c}")]
    EmptyBin { lo: f64, hi: f64, c: f64 },
}

/// Jump distribution family, always scaled to standard deviation `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JumpDist {
    Gaussian,
    /// Uniform on `[-sqrt(3) sigma, sqrt(3) sigma]`.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub jump: JumpDist,
    pub sigma: f64,
    pub drift: f64,
    pub n_steps: usize,
    pub n_realizations: u64,
    pub seed: u64,
    /// Negate every jump. Together with a negated drift this produces the
    /// exact mirror image of the unmirrored walk.
    #[serde(default)]
    pub mirror_jumps: bool,
}

impl SimConfig {
    pub fn new(
        jump: JumpDist,
        sigma: f64,
        drift: f64,
        n_steps: usize,
        n_realizations: u64,
        seed: u64,
    ) -> Result<Self, SimError> {
        let cfg = Self {
            jump,
            sigma,
            drift,
            n_steps,
            n_realizations,
            seed,
            mirror_jumps: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn gaussian(drift: f64, n_steps: usize, n_realizations: u64, seed: u64) -> Result<Self, SimError> {
        Self::new(JumpDist::Gaussian, 1.0, drift, n_steps, n_realizations, seed)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(SimError::BadSigma(self.sigma));
        }
        if !self.drift.is_finite() {
            return Err(SimError::BadDrift(self.drift));
        }
        if self.n_steps == 0 {
            return Err(SimError::NoSteps);
        }
        if self.n_realizations == 0 {
            return Err(SimError::NoRealizations);
        }
        Ok(())
    }

    pub fn with_drift(&self, drift: f64) -> Self {
        Self { drift, ..self.clone() }
    }

    pub fn with_steps(&self, n_steps: usize) -> Self {
        Self { n_steps, ..self.clone() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn mirrored(&self) -> Self {
        Self {
            drift: -self.drift,
            mirror_jumps: !self.mirror_jumps,
            ..self.clone()
        }
    }

    fn ratio(&self) -> f64 {
        self.drift / self.sigma
    }
}

/// A Monte Carlo point estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub value: f64,
    pub std_error: f64,
    pub n_realizations: u64,
}

impl SimEstimate {
    /// Fraction `hits / total` with standard error `sqrt(p (1-p) / total)`.
    pub fn proportion(hits: u64, total: u64) -> Self {
        let n = total as f64;
        let p = hits as f64 / n;
        Self {
            value: p,
            std_error: (p * (1.0 - p) / n).sqrt(),
            n_realizations: total,
        }
    }

    /// Sample mean of per-realization values from their sum and sum of
    /// squares, with the standard error of the mean.
    pub fn mean(sum: u128, sum_sq: u128, total: u64, scale: f64) -> Self {
        let n = total as f64;
        let mean = sum as f64 / n;
        // R * sum_sq - sum^2 is exact in integers unless it overflows u128.
        let spread = (total as u128)
            .checked_mul(sum_sq)
            .and_then(|a| sum.checked_mul(sum).map(|b| a.saturating_sub(b) as f64))
            .unwrap_or_else(|| (n * sum_sq as f64 - (sum as f64).powi(2)).max(0.0));
        let var = if total > 1 { spread / (n * (n - 1.0)) } else { 0.0 };
        Self {
            value: mean * scale,
            std_error: (var / n).sqrt() * scale,
            n_realizations: total,
        }
    }

    /// Whether `value` lies within `k` standard errors of `target`.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.std_error
    }

    /// Difference of two independent estimates, errors combined in quadrature.
    pub fn minus(&self, other: &SimEstimate) -> SimEstimate {
        SimEstimate {
            value: self.value - other.value,
            std_error: self.std_error.hypot(other.std_error),
            n_realizations: self.n_realizations.min(other.n_realizations),
        }
    }

    pub fn scaled(&self, factor: f64) -> SimEstimate {
        SimEstimate {
            value: self.value * factor,
            std_error: self.std_error * factor.abs(),
            n_realizations: self.n_realizations,
        }
    }
}

/// Per-step record statistics, indexed `0..=n_steps`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordStats {
    pub upper_rate: Vec<SimEstimate>,
    pub lower_rate: Vec<SimEstimate>,
    pub mean_upper: Vec<SimEstimate>,
    pub mean_lower: Vec<SimEstimate>,
}

/// Integer counters of one or more realizations.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Tally {
    upper_hits: Vec<u64>,
    lower_hits: Vec<u64>,
    // sum over realizations of the increment of m_n^2 at each record
    upper_sq: Vec<u128>,
    lower_sq: Vec<u128>,
    pos_deaths: Vec<u64>,
    neg_deaths: Vec<u64>,
    window_sum: Vec<u128>,
    window_sq: Vec<u128>,
}

impl Tally {
    fn new(n_steps: usize, n_windows: usize) -> Self {
        let len = n_steps + 1;
        Self {
            upper_hits: vec![0; len],
            lower_hits: vec![0; len],
            upper_sq: vec![0; len],
            lower_sq: vec![0; len],
            pos_deaths: vec![0; len],
            neg_deaths: vec![0; len],
            window_sum: vec![0; n_windows],
            window_sq: vec![0; n_windows],
        }
    }

    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn merge(mut self, other: Tally) -> Tally {
        fn add<T: Copy + std::ops::AddAssign>(a: &mut [T], b: &[T]) {
            a.iter_mut().zip(b).for_each(|(x, &y)| *x += y);
        }
        add(&mut self.upper_hits, &other.upper_hits);
        add(&mut self.lower_hits, &other.lower_hits);
        add(&mut self.upper_sq, &other.upper_sq);
        add(&mut self.lower_sq, &other.lower_sq);
        add(&mut self.pos_deaths, &other.pos_deaths);
        add(&mut self.neg_deaths, &other.neg_deaths);
        add(&mut self.window_sum, &other.window_sum);
        add(&mut self.window_sq, &other.window_sq);
        self
    }
}

/// The random stream of realization `index` under `seed`.
pub fn realization_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[inline]
fn gaussian_jump(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

#[inline]
fn uniform_jump(rng: &mut ChaCha8Rng) -> f64 {
    const SQRT_3: f64 = 1.732_050_807_568_877_2;
    (2.0 * rng.random::<f64>() - 1.0) * SQRT_3
}

struct Engine<'a> {
    cfg: &'a SimConfig,
    windows: &'a [RangeInclusive<usize>],
}

impl Engine<'_> {
    fn run(&self) -> Tally {
        let n_blocks = self.cfg.n_realizations.div_ceil(BLOCK_SIZE);
        let fresh = || Tally::new(self.cfg.n_steps, self.windows.len());
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..n_blocks)
                .into_par_iter()
                .fold(fresh, |tally, block| self.run_block(tally, block))
                .reduce(fresh, Tally::merge)
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..n_blocks).fold(fresh(), |tally, block| self.run_block(tally, block))
        }
    }

    fn run_block(&self, mut tally: Tally, block: u64) -> Tally {
        let start = block * BLOCK_SIZE;
        let end = (start + BLOCK_SIZE).min(self.cfg.n_realizations);
        let mut window_counts = vec![0u64; self.windows.len()];
        for index in start..end {
            window_counts.fill(0);
            match self.cfg.jump {
                JumpDist::Gaussian => self.walk(index, gaussian_jump, &mut tally, &mut window_counts),
                JumpDist::Uniform => self.walk(index, uniform_jump, &mut tally, &mut window_counts),
            }
            for (w, &k) in window_counts.iter().enumerate() {
                tally.window_sum[w] += k as u128;
                tally.window_sq[w] += (k as u128) * (k as u128);
            }
        }
        tally
    }

    #[inline(always)]
    fn walk(
        &self,
        index: u64,
        jump: impl Fn(&mut ChaCha8Rng) -> f64,
        tally: &mut Tally,
        window_counts: &mut [u64],
    ) {
        let cfg = self.cfg;
        let mut rng = realization_rng(cfg.seed, index);
        let scale = if cfg.mirror_jumps { -cfg.sigma } else { cfg.sigma };
        let drift = cfg.drift;
        let (mut x, mut max, mut min) = (0.0f64, 0.0f64, 0.0f64);
        let (mut upper, mut lower) = (1u64, 1u64);
        let (mut pos_alive, mut neg_alive) = (true, true);

        for n in 1..=cfg.n_steps {
            let increment = jump(&mut rng) * scale + drift;
            x += increment;
            if x > max {
                max = x;
                tally.upper_hits[n] += 1;
                tally.upper_sq[n] += (2 * upper + 1) as u128;
                upper += 1;
                if !self.windows.is_empty() {
                    if let Some(w) = self.window_of(n) {
                        window_counts[w] += 1;
                    }
                }
            }
            if x < min {
                min = x;
                tally.lower_hits[n] += 1;
                tally.lower_sq[n] += (2 * lower + 1) as u128;
                lower += 1;
            }
            if pos_alive && x <= 0.0 {
                pos_alive = false;
                tally.pos_deaths[n] += 1;
            }
            if neg_alive && x >= 0.0 {
                neg_alive = false;
                tally.neg_deaths[n] += 1;
            }
        }
    }

    fn window_of(&self, n: usize) -> Option<usize> {
        let w = self.windows.partition_point(|r| *r.end() < n);
        (w < self.windows.len() && self.windows[w].contains(&n)).then_some(w)
    }
}

fn run(cfg: &SimConfig, windows: &[RangeInclusive<usize>]) -> Result<Tally, SimError> {
    cfg.validate()?;
    debug_assert!(windows.windows(2).all(|w| w[0].end() < w[1].start()));
    Ok(Engine { cfg, windows }.run())
}

fn rates(hits: &[u64], total: u64) -> Vec<SimEstimate> {
    let mut out: Vec<SimEstimate> = hits.iter().map(|&k| SimEstimate::proportion(k, total)).collect();
    out[0] = SimEstimate::proportion(total, total);
    out
}

fn means(hits: &[u64], sq: &[u128], total: u64) -> Vec<SimEstimate> {
    let mut sum = total as u128;
    let mut sum_sq = total as u128;
    hits.iter()
        .zip(sq)
        .enumerate()
        .map(|(n, (&k, &s))| {
            if n > 0 {
                sum += k as u128;
                sum_sq += s;
            }
            SimEstimate::mean(sum, sum_sq, total, 1.0)
        })
        .collect()
}

/// Every per-step estimate from one set of realizations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkEstimates {
    pub records: RecordStats,
    pub survival_pos: Vec<SimEstimate>,
    pub survival_neg: Vec<SimEstimate>,
}

impl WalkEstimates {
    pub fn survival(&self, side: Side) -> &[SimEstimate] {
        match side {
            Side::Positive => &self.survival_pos,
            Side::Negative => &self.survival_neg,
        }
    }
}

fn survival_curve(deaths: &[u64], total: u64) -> Vec<SimEstimate> {
    let mut alive = total;
    deaths
        .iter()
        .map(|&d| {
            alive -= d;
            SimEstimate::proportion(alive, total)
        })
        .collect()
}

/// Record statistics and both survival curves from the same realizations.
pub fn simulate(cfg: &SimConfig) -> Result<WalkEstimates, SimError> {
    let tally = run(cfg, &[])?;
    let total = cfg.n_realizations;
    Ok(WalkEstimates {
        records: RecordStats {
            upper_rate: rates(&tally.upper_hits, total),
            lower_rate: rates(&tally.lower_hits, total),
            mean_upper: means(&tally.upper_hits, &tally.upper_sq, total),
            mean_lower: means(&tally.lower_hits, &tally.lower_sq, total),
        },
        survival_pos: survival_curve(&tally.pos_deaths, total),
        survival_neg: survival_curve(&tally.neg_deaths, total),
    })
}

/// Record rate and mean record number of upper and lower records at every step.
pub fn simulate_record_stats(cfg: &SimConfig) -> Result<RecordStats, SimError> {
    simulate(cfg).map(|e| e.records)
}

/// Survival probability `q_+(n)` (walk strictly above the start at every
/// step `1..=n`) or `q_-(n)` (strictly below). A walk landing exactly on 0
/// counts as dead. Entry 0 is 1.
pub fn simulate_survival(cfg: &SimConfig, side: Side) -> Result<Vec<SimEstimate>, SimError> {
    let tally = run(cfg, &[])?;
    let deaths = match side {
        Side::Positive => &tally.pos_deaths,
        Side::Negative => &tally.neg_deaths,
    };
    Ok(survival_curve(deaths, cfg.n_realizations))
}

/// Record indicator averaged over the last `n_tail` steps (default: the
/// final half of the walk) and over realizations. The error treats each
/// realization's tail fraction as one sample, so correlations along a path
/// are accounted for.
pub fn estimate_asymptotic_rate(cfg: &SimConfig, n_tail: Option<usize>) -> Result<SimEstimate, SimError> {
    cfg.validate()?;
    let n_tail = n_tail.unwrap_or(cfg.n_steps.div_ceil(2));
    if n_tail == 0 || n_tail > cfg.n_steps {
        return Err(SimError::BadTail {
            tail: n_tail,
            steps: cfg.n_steps,
        });
    }
    let window = (cfg.n_steps - n_tail + 1)..=cfg.n_steps;
    let tally = run(cfg, std::slice::from_ref(&window))?;
    Ok(SimEstimate::mean(
        tally.window_sum[0],
        tally.window_sq[0],
        cfg.n_realizations,
        1.0 / n_tail as f64,
    ))
}

/// One point of the scaling function `g(x) = P_n(c) sigma / c` at `x = (c/sigma)^2 n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingPoint {
    pub c: f64,
    pub n: usize,
    pub x: f64,
    pub g: f64,
    pub std_error: f64,
}

/// Scaling-function points at every step `1..=n_steps` for each drift.
/// The template supplies everything but the drift.
pub fn estimate_scaling_function(
    c_values: &[f64],
    template: &SimConfig,
) -> Result<Vec<ScalingPoint>, SimError> {
    let mut points = Vec::new();
    for &c in c_values {
        let cfg = template.with_drift(c);
        let r = cfg.ratio();
        if r == 0.0 {
            return Err(SimError::ZeroDrift);
        }
        let stats = simulate_record_stats(&cfg)?;
        points.extend(stats.upper_rate.iter().enumerate().skip(1).map(|(n, est)| {
            let g = est.scaled(1.0 / r);
            ScalingPoint {
                c,
                n,
                x: r * r * n as f64,
                g: g.value,
                std_error: g.std_error,
            }
        }));
    }
    Ok(points)
}

/// Scaling function averaged over the steps whose `x` falls in `[x_lo, x_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BinnedScalingPoint {
    pub c: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    pub n_lo: usize,
    pub n_hi: usize,
    pub g: SimEstimate,
}

/// Bin-averaged scaling function. For each drift the walk is run just long
/// enough to reach the largest bin; the per-realization record count inside a
/// bin, divided by the bin length and by `c/sigma`, is one sample of `g`.
///
/// Averaging over the same `x` interval for every drift keeps the comparison
/// exact under perfect collapse, whatever the shape of `g` inside the bin.
pub fn estimate_scaling_bins(
    c_values: &[f64],
    template: &SimConfig,
    bins: &[(f64, f64)],
) -> Result<Vec<BinnedScalingPoint>, SimError> {
    let mut sorted = bins.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (i, &(lo, hi)) in sorted.iter().enumerate() {
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) || (i > 0 && lo <= sorted[i - 1].1) {
            return Err(SimError::BadBin { lo, hi });
        }
    }
    let mut points = Vec::new();
    for &c in c_values {
        let r = c / template.sigma;
        if r == 0.0 {
            return Err(SimError::ZeroDrift);
        }
        let r2 = r * r;
        let windows = sorted
            .iter()
            .map(|&(lo, hi)| {
                // small tolerance so grid-aligned bins land on whole steps
                let n_lo = ((lo / r2) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
                let n_hi = ((hi / r2) * (1.0 + 1e-12)).floor() as usize;
                if n_hi < n_lo {
                    Err(SimError::EmptyBin { lo, hi, c })
                } else {
                    Ok(n_lo..=n_hi)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let n_steps = *windows.last().map(|w| w.end()).unwrap_or(&1);
        let cfg = template.with_drift(c).with_steps(n_steps);
        let tally = run(&cfg, &windows)?;
        for (w, (window, &(x_lo, x_hi))) in windows.iter().zip(&sorted).enumerate() {
            let len = (window.end() - window.start() + 1) as f64;
            points.push(BinnedScalingPoint {
                c,
                x_lo,
                x_hi,
                n_lo: *window.start(),
                n_hi: *window.end(),
                g: SimEstimate::mean(
                    tally.window_sum[w],
                    tally.window_sq[w],
                    cfg.n_realizations,
                    1.0 / (len * r),
                ),
            });
        }
    }
    Ok(points)
}

/// Full path `X_0..=X_n` of realization `index`, drawn exactly as the
/// estimators draw it. Meant for diagnostics and tests.
pub fn sample_path(cfg: &SimConfig, index: u64) -> Result<Vec<f64>, SimError> {
    cfg.validate()?;
    let mut rng = realization_rng(cfg.seed, index);
    let scale = if cfg.mirror_jumps { -cfg.sigma } else { cfg.sigma };
    let mut x = 0.0;
    let mut path = Vec::with_capacity(cfg.n_steps + 1);
    path.push(x);
    for _ in 0..cfg.n_steps {
        let z = match cfg.jump {
            JumpDist::Gaussian => gaussian_jump(&mut rng),
            JumpDist::Uniform => uniform_jump(&mut rng),
        };
        x += z * scale + cfg.drift;
        path.push(x);
    }
    Ok(path)
}
