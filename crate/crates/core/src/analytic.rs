//! Closed-form and asymptotic expressions for record statistics of a
//! Gaussian random walk `X_n = X_{n-1} + xi_n + c` with `xi_n ~ N(0, sigma^2)`.
//!
//! Every function returns the formula value regardless of whether the inputs
//! sit inside the regime where the approximation is accurate. The regimes are
//! noted on each function: "small drift" means `c/sigma << n^(-1/2)`, "large
//! drift" means `c/sigma >> 1`.
//!
//! The error function comes from `libm` (a port of the FreeBSD msun routines,
//! accurate to about one ulp). Tails are evaluated through `erfc` so that
//! probabilities close to zero keep their relative accuracy.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI, SQRT_2};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slope of the asymptotic record rate for vanishing drift, `P(c) ~ 1.39 c/sigma`.
/// An empirical constant measured by simulation.
pub const SMALL_DRIFT_RATE_SLOPE: f64 = 1.39;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("sigma must be positive and finite, got {0}")]
    BadSigma(f64),
    #[error("drift must be finite, got {0}")]
    BadDrift(f64),
    #[error("record index m={m} outside [1, {}] for n={n}", n + 1)]
    RecordIndexOutOfRange { m: usize, n: usize },
    #[error("drift must be positive for this expression, got c={0}")]
    NonPositiveDrift(f64),
}

/// Drift per step and jump standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftParams {
    c: f64,
    sigma: f64,
}

impl DriftParams {
    pub fn new(c: f64, sigma: f64) -> Result<Self, AnalyticError> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(AnalyticError::BadSigma(sigma));
        }
        if !c.is_finite() {
            return Err(AnalyticError::BadDrift(c));
        }
        Ok(Self { c, sigma })
    }

    pub fn symmetric() -> Self {
        Self { c: 0.0, sigma: 1.0 }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Normalized drift `c/sigma`.
    pub fn ratio(&self) -> f64 {
        self.c / self.sigma
    }
}

/// Which side of the starting point a probability refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Side::Positive => Side::Negative,
            Side::Negative => Side::Positive,
        }
    }
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// Probability that a symmetric walk has exactly `m` records after `n` steps,
/// `C(2n-m+1, n) 2^-(2n-m+1)`.
///
/// The lower binomial index is `n`. Writing it as `m` gives
/// [`pi_symmetric_lower_index_m`], which fails even `Pi(1, 0) = 1`; the
/// test suite checks both against the generating-function engine.
pub fn pi_symmetric(m: usize, n: usize) -> Result<f64, AnalyticError> {
    if m == 0 || m > n + 1 {
        return Err(AnalyticError::RecordIndexOutOfRange { m, n });
    }
    let top = 2 * n + 1 - m;
    Ok((ln_binomial(top, n) - top as f64 * LN_2).exp())
}

/// The variant `C(2n-m+1, m) 2^-(2n-m+1)`. Kept only so the two readings can
/// be compared; it is not a probability distribution.
pub fn pi_symmetric_lower_index_m(m: usize, n: usize) -> Result<f64, AnalyticError> {
    if m == 0 || m > n + 1 {
        return Err(AnalyticError::RecordIndexOutOfRange { m, n });
    }
    let top = 2 * n + 1 - m;
    if m > top {
        return Ok(0.0);
    }
    Ok((ln_binomial(top, m) - top as f64 * LN_2).exp())
}

/// `C(2n, n) 2^-2n`: record rate of the symmetric walk, equal to its
/// one-sided survival probability. Uses `q(n) = q(n-1) (2n-1)/(2n)`.
pub fn record_rate_symmetric(n: usize) -> f64 {
    (1..=n).fold(1.0, |q, k| q * (2 * k - 1) as f64 / (2 * k) as f64)
}

/// `record_rate_symmetric(k)` for every `k` in `0..=n_max`.
pub fn record_rate_symmetric_profile(n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut q = 1.0;
    out.push(q);
    for k in 1..=n_max {
        q *= (2 * k - 1) as f64 / (2 * k) as f64;
        out.push(q);
    }
    out
}

/// Exact mean number of records of a symmetric walk after `n` steps,
/// `(2n+1) C(2n, n) 2^-2n`, asymptotically `2 sqrt(n/pi)`.
pub fn mean_records_symmetric(n: usize) -> f64 {
    (2 * n + 1) as f64 * record_rate_symmetric(n)
}

/// Probability that the drifted Gaussian walk is above (`Positive`) or
/// below (`Negative`) the origin at step `n`:
/// `(1 +/- erf(sqrt(n/2) c/sigma)) / 2`.
pub fn p_plus_minus(n: usize, params: DriftParams, side: Side) -> f64 {
    let y = (n as f64 / 2.0).sqrt() * params.ratio();
    // The side the drift points away from is a tail; take it from erfc.
    let away = 0.5 * libm::erfc(y.abs());
    let toward = 1.0 - away;
    match (side, y >= 0.0) {
        (Side::Positive, true) | (Side::Negative, false) => toward,
        _ => away,
    }
}

/// Small-drift survival probability `1/sqrt(pi n) +/- c/(sqrt(2) sigma)`.
pub fn survival_small_drift(n: usize, params: DriftParams, side: Side) -> f64 {
    1.0 / (PI * n as f64).sqrt() + side.sign() * params.ratio() * FRAC_1_SQRT_2
}

/// Small-drift first-passage probability
/// `n^-3/2 / (2 sqrt(pi)) +/- c/(sqrt(2) pi sigma) n^-1/2`.
pub fn first_passage_small_drift(n: usize, params: DriftParams, side: Side) -> f64 {
    let n = n as f64;
    n.powf(-1.5) / (2.0 * PI.sqrt()) + side.sign() * params.ratio() / (SQRT_2 * PI) / n.sqrt()
}

/// Drift correction to the mean record number,
/// `(c/sigma) (sqrt 2/pi) (n arctan(sqrt n) - sqrt n)`.
pub fn mean_records_drift_correction(n: usize, params: DriftParams) -> f64 {
    let n = n as f64;
    let root = n.sqrt();
    params.ratio() * SQRT_2 / PI * (n * root.atan() - root)
}

/// Small-drift mean record number. The symmetric part is the exact
/// `(2n+1) C(2n,n) 2^-2n` rather than its large-`n` form `2 sqrt(n/pi)`.
pub fn mean_records_small_drift(n: usize, params: DriftParams) -> f64 {
    mean_records_symmetric(n) + mean_records_drift_correction(n, params)
}

/// Which form of the small-drift record rate to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateForm {
    /// `1/sqrt(pi n) + (c/sigma)(sqrt 2/pi) arctan(sqrt n)`.
    #[default]
    Arctan,
    /// `1/sqrt(pi n) + c/(sqrt 2 sigma)`, the `n -> infinity` limit of the correction.
    LargeN,
}

/// Small-drift record rate.
pub fn record_rate_small_drift(n: usize, params: DriftParams, form: RateForm) -> f64 {
    let n = n as f64;
    let correction = match form {
        RateForm::Arctan => SQRT_2 / PI * n.sqrt().atan(),
        RateForm::LargeN => FRAC_1_SQRT_2,
    };
    1.0 / (PI * n).sqrt() + params.ratio() * correction
}

/// Large-drift negative survival probability
/// `sigma / (c sqrt(2 pi n^3)) exp(-c^2 n / (2 sigma^2))`.
pub fn survival_large_drift(n: usize, params: DriftParams) -> Result<f64, AnalyticError> {
    if params.c <= 0.0 {
        return Err(AnalyticError::NonPositiveDrift(params.c));
    }
    let n = n as f64;
    let r = params.ratio();
    Ok((-r * r * n / 2.0).exp() / (r * (2.0 * PI * n.powi(3)).sqrt()))
}

/// Large-drift branch `1 - sigma/(sqrt(2 pi) c) exp(-c^2/(2 sigma^2))`.
pub fn asymptotic_rate_large_drift(ratio: f64) -> f64 {
    1.0 - (-ratio * ratio / 2.0).exp() / ((2.0 * PI).sqrt() * ratio)
}

/// Piecewise asymptotic record rate `P(c) = lim P_n(c)`.
///
/// Below the switch point the linear law `slope * c/sigma` is used, above it
/// the large-drift expression. The two branches never cross (the linear
/// branch lies above the other for every `c/sigma > 0`), so the switch sits at
/// their closest approach, found once by golden-section search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticRate {
    slope: f64,
    threshold: f64,
}

impl Default for AsymptoticRate {
    fn default() -> Self {
        static DEFAULT: OnceLock<AsymptoticRate> = OnceLock::new();
        *DEFAULT.get_or_init(|| AsymptoticRate::with_slope(SMALL_DRIFT_RATE_SLOPE))
    }
}

impl AsymptoticRate {
    /// Uses `slope` in place of the default small-drift constant.
    pub fn with_slope(slope: f64) -> Self {
        let gap = |r: f64| (slope * r - asymptotic_rate_large_drift(r)).abs();
        let threshold = golden_section_min(gap, 0.05, 3.0, 1e-10);
        Self { slope, threshold }
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    /// Normalized drift at which the evaluation switches branch.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn small_drift_branch(&self, ratio: f64) -> f64 {
        self.slope * ratio
    }

    pub fn large_drift_branch(&self, ratio: f64) -> f64 {
        asymptotic_rate_large_drift(ratio)
    }

    pub fn eval(&self, params: DriftParams) -> Result<f64, AnalyticError> {
        if params.c <= 0.0 {
            return Err(AnalyticError::NonPositiveDrift(params.c));
        }
        let r = params.ratio();
        Ok(if r < self.threshold {
            self.small_drift_branch(r)
        } else {
            self.large_drift_branch(r)
        })
    }
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// Asymptotic record rate with the default slope.
pub fn asymptotic_record_rate(params: DriftParams) -> Result<f64, AnalyticError> {
    AsymptoticRate::default().eval(params)
}

/// Large-drift mean record number `n (1 - sigma/(sqrt(2 pi) c) exp(-c^2/(2 sigma^2)))`.
pub fn mean_records_large_drift(n: usize, params: DriftParams) -> Result<f64, AnalyticError> {
    if params.c <= 0.0 {
        return Err(AnalyticError::NonPositiveDrift(params.c));
    }
    Ok(n as f64 * asymptotic_rate_large_drift(params.ratio()))
}

/// Crossover time `(sigma/c)^2`: an order-of-magnitude scale beyond which the
/// drift dominates diffusion, not a sharp boundary.
pub fn crossover_time(params: DriftParams) -> Result<f64, AnalyticError> {
    if params.c == 0.0 {
        return Err(AnalyticError::NonPositiveDrift(params.c));
    }
    let r = params.ratio();
    Ok(1.0 / (r * r))
}

/// Limiting branches of the scaling function `g` in `P_n(c) = (c/sigma) g((c/sigma)^2 n)`.
///
/// Only the two asymptotes are known; nothing is claimed about how they join.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingLimits {
    /// `g(x -> 0) ~ 1/sqrt(pi x)`.
    pub small_x: f64,
    /// `g(x -> infinity) ~ 1.39`.
    pub large_x: f64,
}

pub fn scaling_function_limits(x: f64) -> ScalingLimits {
    ScalingLimits {
        small_x: 1.0 / (PI * x).sqrt(),
        large_x: SMALL_DRIFT_RATE_SLOPE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(c: f64, sigma: f64) -> DriftParams {
        DriftParams::new(c, sigma).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn drift_params_validation() {
        assert!(DriftParams::new(0.1, 0.0).is_err());
        assert!(DriftParams::new(0.1, -1.0).is_err());
        assert!(DriftParams::new(f64::NAN, 1.0).is_err());
        assert!(DriftParams::new(0.1, f64::INFINITY).is_err());
        assert_eq!(params(0.2, 2.0).ratio(), 0.1);
    }

    #[test]
    fn pi_symmetric_small_cases() {
        close(pi_symmetric(1, 0).unwrap(), 1.0, 1e-15);
        close(pi_symmetric(1, 1).unwrap(), 0.5, 1e-15);
        close(pi_symmetric(2, 1).unwrap(), 0.5, 1e-15);
        close(pi_symmetric(1, 2).unwrap(), 0.375, 1e-15);
        close(pi_symmetric(2, 2).unwrap(), 0.375, 1e-15);
        close(pi_symmetric(3, 2).unwrap(), 0.25, 1e-15);
        assert!(pi_symmetric(0, 3).is_err());
        assert!(pi_symmetric(5, 3).is_err());
        // The other reading already fails at the first entry.
        assert_eq!(pi_symmetric_lower_index_m(1, 0).unwrap(), 0.0);
    }

    #[test]
    fn pi_symmetric_normalized_and_first_term_is_survival() {
        for n in 0..=50 {
            let total: f64 = (1..=n + 1).map(|m| pi_symmetric(m, n).unwrap()).sum();
            close(total, 1.0, 1e-12);
            close(pi_symmetric(1, n).unwrap(), record_rate_symmetric(n), 1e-13);
        }
    }

    #[test]
    fn symmetric_rate_values() {
        assert_eq!(record_rate_symmetric(0), 1.0);
        assert_eq!(record_rate_symmetric(1), 0.5);
        assert_eq!(record_rate_symmetric(2), 0.375);
        let n = 10_000.0;
        let stirling = 1.0 / (PI * n).sqrt() * (1.0 - 1.0 / (8.0 * n));
        let q = record_rate_symmetric(10_000);
        assert!(((q - stirling) / stirling).abs() < 1e-4);
        // no overflow or underflow far out
        let q = record_rate_symmetric(1_000_000);
        let big = 1.0 / (PI * 1e6).sqrt();
        assert!(((q - big) / big).abs() < 1e-6);
        let profile = record_rate_symmetric_profile(20);
        for (n, &v) in profile.iter().enumerate() {
            assert_eq!(v, record_rate_symmetric(n));
        }
    }

    #[test]
    fn symmetric_mean_values() {
        assert_eq!(mean_records_symmetric(0), 1.0);
        close(mean_records_symmetric(2), 1.875, 1e-15);
        let m = mean_records_symmetric(5000);
        close(m, 79.79, 0.01);
        let asym = 2.0 * (5000.0 / PI).sqrt();
        assert!(((m - asym) / asym).abs() < 1e-3);
        for n in 1..500 {
            let diff = mean_records_symmetric(n) - mean_records_symmetric(n - 1);
            close(diff, record_rate_symmetric(n), 1e-13);
        }
    }

    #[test]
    fn sign_probabilities() {
        for n in [1, 5, 100] {
            assert_eq!(p_plus_minus(n, params(0.0, 1.0), Side::Positive), 0.5);
            assert_eq!(p_plus_minus(n, params(0.0, 1.0), Side::Negative), 0.5);
        }
        // standard normal CDF at 1
        close(p_plus_minus(1, params(1.0, 1.0), Side::Positive), 0.841_344_746_068_542_9, 1e-15);
        close(p_plus_minus(1, params(-1.0, 1.0), Side::Positive), 0.158_655_253_931_457_05, 1e-15);
        // Phi(-10), deep tail keeps relative accuracy
        let tail = p_plus_minus(100, params(1.0, 1.0), Side::Negative);
        let expected = 7.619_853_024_160_527e-24;
        assert!(((tail - expected) / expected).abs() < 1e-12);
        for &(n, c) in &[(1, 0.3), (7, -2.0), (1000, 0.01)] {
            let p = params(c, 1.5);
            close(p_plus_minus(n, p, Side::Positive) + p_plus_minus(n, p, Side::Negative), 1.0, 1e-15);
        }
    }

    #[test]
    fn small_drift_survival_and_first_passage() {
        let p = params(0.001, 1.0);
        close(survival_small_drift(100, p, Side::Positive), 0.057126, 1e-6);
        close(survival_small_drift(100, p, Side::Negative), 0.055712, 1e-6);
        close(survival_small_drift(100, params(0.0, 1.0), Side::Positive), 1.0 / (100.0 * PI).sqrt(), 1e-16);

        close(first_passage_small_drift(1, params(0.0, 1.0), Side::Positive), 0.2821, 1e-4);
        close(first_passage_small_drift(100, params(0.01, 1.0), Side::Positive), 0.000507, 1e-6);
        for n in 50..400 {
            let exact = record_rate_symmetric(n - 1) - record_rate_symmetric(n);
            let approx = first_passage_small_drift(n, params(0.0, 1.0), Side::Positive);
            assert!(((approx - exact) / exact).abs() < 0.05, "n={n}");
        }
        // corrections are antisymmetric in side
        let plus = survival_small_drift(30, p, Side::Positive) - survival_small_drift(30, params(0.0, 1.0), Side::Positive);
        let minus = survival_small_drift(30, p, Side::Negative) - survival_small_drift(30, params(0.0, 1.0), Side::Negative);
        close(plus, -minus, 1e-16);
    }

    #[test]
    fn small_drift_mean_and_rate() {
        for n in [1, 10, 1000] {
            assert_eq!(mean_records_small_drift(n, params(0.0, 1.0)), mean_records_symmetric(n));
        }
        close(mean_records_small_drift(5000, params(0.025, 1.0)), 166.59, 0.01);
        close(mean_records_drift_correction(1, params(0.01, 1.0)), -9.66e-4, 1e-6);

        close(record_rate_small_drift(100, params(0.0, 1.0), RateForm::Arctan), 1.0 / (100.0 * PI).sqrt(), 1e-16);
        close(record_rate_small_drift(100, params(0.001, 1.0), RateForm::Arctan), 0.057081, 1e-6);
        let far = record_rate_small_drift(1 << 40, params(0.01, 1.0), RateForm::Arctan);
        let limit = record_rate_small_drift(1 << 40, params(0.01, 1.0), RateForm::LargeN);
        close(far, limit, 1e-8);
    }

    #[test]
    fn large_drift_expressions() {
        let p = params(2.0, 1.0);
        close(survival_large_drift(1, p).unwrap(), 0.02700, 1e-5);
        let q: Vec<f64> = (1..200).map(|n| survival_large_drift(n, p).unwrap()).collect();
        assert!(q.windows(2).all(|w| w[1] < w[0]));
        let ratio = survival_large_drift(301, p).unwrap() / survival_large_drift(300, p).unwrap();
        close(ratio, (-2.0f64).exp(), 1e-3);
        assert!(survival_large_drift(1, params(0.0, 1.0)).is_err());

        close(asymptotic_record_rate(p).unwrap(), 0.9730, 1e-4);
        close(asymptotic_record_rate(params(0.01, 1.0)).unwrap(), 0.0139, 1e-12);
        close(mean_records_large_drift(1000, p).unwrap(), 973.0, 0.05);
        let m1 = mean_records_large_drift(1, p).unwrap();
        close(mean_records_large_drift(777, p).unwrap(), 777.0 * m1, 1e-9);
        close(mean_records_large_drift(10, params(40.0, 1.0)).unwrap(), 10.0, 1e-12);
        assert!(asymptotic_record_rate(params(-1.0, 1.0)).is_err());
    }

    #[test]
    fn asymptotic_rate_branches() {
        let rate = AsymptoticRate::default();
        let t = rate.threshold();
        assert!(t > 0.5 && t < 0.8, "threshold {t}");
        // no crossing anywhere on a fine grid
        for k in 1..4000 {
            let r = k as f64 * 1e-3;
            assert!(rate.small_drift_branch(r) > rate.large_drift_branch(r));
        }
        let mut last = 0.0;
        for k in 1..2000 {
            let r = k as f64 * 2.5e-3;
            let v = rate.eval(params(r, 1.0)).unwrap();
            assert!(v > 0.0 && v < 1.0, "P({r}) = {v}");
            if r < t || r - 2.5e-3 >= t {
                assert!(v > last);
            }
            last = v;
        }
        let custom = AsymptoticRate::with_slope(1.41);
        close(custom.eval(params(0.01, 1.0)).unwrap(), 0.0141, 1e-12);
    }

    #[test]
    fn crossover_and_scaling() {
        close(crossover_time(params(0.1, 1.0)).unwrap(), 100.0, 1e-9);
        close(crossover_time(params(0.01, 1.0)).unwrap(), 1e4, 1e-6);
        close(crossover_time(params(3.0, 3.0)).unwrap(), 1.0, 1e-15);
        assert!(crossover_time(params(0.0, 1.0)).is_err());
        let g = scaling_function_limits(1e-4);
        close(g.small_x, 56.42, 0.01);
        assert_eq!(g.large_x, 1.39);
    }
}
