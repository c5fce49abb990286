//! Truncated power series and the generating-function route to exact record
//! statistics of a walk with arbitrary sign probabilities.
//!
//! Given `p(n)`, the probability that the walk sits on one side of the origin
//! after `n` steps, the survival generating function is
//! `q(z) = exp(sum_{n>=1} p(n) z^n / n)`. From the negative-side survival
//! series everything else follows: first passage `f(z) = 1 - (1-z) q(z)`,
//! the record-number distribution `sum_n Pi(m,n) z^n = f_-(z)^(m-1) q_-(z)`,
//! and the mean record number `m(z) = 1 / ((1-z)^2 q_-(z))`.
//!
//! All products are plain `O(N^2)` convolutions in `f64`. The rounding error
//! per coefficient is bounded by roughly `N * eps`. Small negative values that
//! rounding produces are left in place; callers clamp them when presenting.

use std::ops::Mul;

use thiserror::Error;

use crate::analytic::{p_plus_minus, DriftParams, Side};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 5000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("power series needs at least one coefficient")]
    Empty,
    #[error("non-invertible series (constant term {0:e})")]
    NonInvertible(f64),
    #[error("exponential needs a zero constant term, got {0}")]
    NonZeroConstant(f64),
    #[error("sign probability p({n}) = {value} outside [0, 1]")]
    ProbabilityOutOfRange { n: usize, value: f64 },
    #[error("survival series must start at 1, got {0}")]
    BadSurvivalStart(f64),
    #[error("first-passage series must start at 0, got {0}")]
    BadFirstPassageStart(f64),
    #[error("record index must be at least 1")]
    ZeroRecordIndex,
    #[error("the record rate has a positive limit only for upward drift, got c = {0}")]
    NonPositiveDrift(f64),
}

/// Coefficients `a_0..=a_N` of a series truncated at order `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<f64>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<f64>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { coeffs })
    }

    /// The series `1`.
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = 1.0;
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![0.0; order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Coefficient of `z^n`, zero past the truncation order.
    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    /// Cauchy product, truncated at the smaller of the two orders.
    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        let (a, b) = (&self.coeffs, &other.coeffs);
        let coeffs = (0..=order)
            .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
            .collect();
        PowerSeries { coeffs }
    }

    /// Multiplicative inverse: `b_0 = 1/a_0`, `b_k = -(sum_{j=1..k} a_j b_{k-j}) / a_0`.
    pub fn inv(&self) -> Result<PowerSeries, SeriesError> {
        let a = &self.coeffs;
        if a[0].abs() <= 1e-30 {
            return Err(SeriesError::NonInvertible(a[0]));
        }
        let mut b = Vec::with_capacity(a.len());
        b.push(1.0 / a[0]);
        for k in 1..a.len() {
            let s: f64 = (1..=k).map(|j| a[j] * b[k - j]).sum();
            b.push(-s / a[0]);
        }
        Ok(PowerSeries { coeffs: b })
    }

    /// Exponential of a series with zero constant term, from
    /// `J b_J = sum_{k=1..J} k a_k b_{J-k}`, `b_0 = 1`.
    pub fn exp(&self) -> Result<PowerSeries, SeriesError> {
        let a = &self.coeffs;
        if a[0] != 0.0 {
            return Err(SeriesError::NonZeroConstant(a[0]));
        }
        let weighted: Vec<f64> = a.iter().enumerate().map(|(k, &v)| k as f64 * v).collect();
        let mut b = Vec::with_capacity(a.len());
        b.push(1.0);
        for j in 1..a.len() {
            let s: f64 = (1..=j).map(|k| weighted[k] * b[j - k]).sum();
            b.push(s / j as f64);
        }
        Ok(PowerSeries { coeffs: b })
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::mul(self, rhs)
    }
}

/// Survival series `q(0..=N)` from sign probabilities, where `p[k]` holds
/// `p(k+1)` so `N = p.len()`.
pub fn sparre_andersen_survival(p: &[f64]) -> Result<PowerSeries, SeriesError> {
    let mut inner = Vec::with_capacity(p.len() + 1);
    inner.push(0.0);
    for (k, &v) in p.iter().enumerate() {
        let n = k + 1;
        if !(0.0..=1.0).contains(&v) {
            return Err(SeriesError::ProbabilityOutOfRange { n, value: v });
        }
        inner.push(v / n as f64);
    }
    PowerSeries { coeffs: inner }.exp()
}

/// `p(1..=order)` for the drifted Gaussian walk on the given side.
pub fn gaussian_sign_probabilities(params: DriftParams, side: Side, order: usize) -> Vec<f64> {
    (1..=order).map(|n| p_plus_minus(n, params, side)).collect()
}

/// Limit `P(c) = lim_n q_+(n) = exp(-sum_{n>=1} p_-(n)/n)` for a Gaussian
/// walk drifting upward, summed until the terms fall below `1e-18`.
/// The number of terms grows like `(sigma/c)^2`.
pub fn limiting_record_rate(params: DriftParams) -> Result<f64, SeriesError> {
    if params.c() <= 0.0 {
        return Err(SeriesError::NonPositiveDrift(params.c()));
    }
    let mut sum = 0.0;
    for n in 1.. {
        let term = p_plus_minus(n, params, Side::Negative) / n as f64;
        sum += term;
        if term < 1e-18 {
            break;
        }
    }
    Ok((-sum).exp())
}

/// `f(0) = 0`, `f(n) = q(n-1) - q(n)`.
pub fn first_passage_from_survival(q: &PowerSeries) -> Result<PowerSeries, SeriesError> {
    check_survival(q)?;
    let c = &q.coeffs;
    let coeffs = std::iter::once(0.0)
        .chain(c.windows(2).map(|w| w[0] - w[1]))
        .collect();
    Ok(PowerSeries { coeffs })
}

fn check_survival(q: &PowerSeries) -> Result<(), SeriesError> {
    if (q.coeffs[0] - 1.0).abs() > 1e-12 {
        return Err(SeriesError::BadSurvivalStart(q.coeffs[0]));
    }
    Ok(())
}

fn check_first_passage(f: &PowerSeries) -> Result<(), SeriesError> {
    if f.coeffs[0].abs() > 1e-12 {
        return Err(SeriesError::BadFirstPassageStart(f.coeffs[0]));
    }
    Ok(())
}

/// Series whose coefficient `n` is `Pi(m, n)`, the probability of exactly `m`
/// upper records among entries `0..=n`.
pub fn record_number_distribution(
    f_minus: &PowerSeries,
    q_minus: &PowerSeries,
    m: usize,
) -> Result<PowerSeries, SeriesError> {
    if m == 0 {
        return Err(SeriesError::ZeroRecordIndex);
    }
    Ok(RecordDistributions::new(f_minus, q_minus)?
        .nth(m - 1)
        .expect("iterator is unbounded"))
}

/// Yields the `Pi(m, .)` series for `m = 1, 2, ...`, one multiplication by
/// `f_-` per step.
#[derive(Debug, Clone)]
pub struct RecordDistributions {
    f_minus: PowerSeries,
    power: PowerSeries,
    q_minus: PowerSeries,
}

impl RecordDistributions {
    pub fn new(f_minus: &PowerSeries, q_minus: &PowerSeries) -> Result<Self, SeriesError> {
        check_first_passage(f_minus)?;
        check_survival(q_minus)?;
        let order = f_minus.order().min(q_minus.order());
        Ok(Self {
            f_minus: f_minus.clone(),
            power: PowerSeries::one(order),
            q_minus: q_minus.clone(),
        })
    }
}

impl Iterator for RecordDistributions {
    type Item = PowerSeries;

    fn next(&mut self) -> Option<PowerSeries> {
        let out = self.power.mul(&self.q_minus);
        self.power = self.power.mul(&self.f_minus);
        Some(out)
    }
}

/// Mean record number series `m(z) = 1 / ((1-z)^2 q_-(z))`.
pub fn mean_record_series(q_minus: &PowerSeries) -> Result<PowerSeries, SeriesError> {
    check_survival(q_minus)?;
    // (1-z)^2 q(z) by direct second differencing, exact to the order of q.
    let c = &q_minus.coeffs;
    let coeffs = (0..c.len())
        .map(|k| {
            let mut v = c[k];
            if k >= 1 {
                v -= 2.0 * c[k - 1];
            }
            if k >= 2 {
                v += c[k - 2];
            }
            v
        })
        .collect();
    PowerSeries { coeffs }.inv()
}

/// Record rate `P_0 = 1`, `P_n = m_n - m_{n-1}`.
pub fn record_rate_from_mean(m: &PowerSeries) -> PowerSeries {
    let c = &m.coeffs;
    let coeffs = std::iter::once(c[0])
        .chain(c.windows(2).map(|w| w[1] - w[0]))
        .collect();
    PowerSeries { coeffs }
}

/// All generating-function outputs for one drifted Gaussian walk.
#[derive(Debug, Clone)]
pub struct WalkSeries {
    pub params: DriftParams,
    pub q_plus: PowerSeries,
    pub q_minus: PowerSeries,
    pub f_plus: PowerSeries,
    pub f_minus: PowerSeries,
    pub mean_records: PowerSeries,
    pub record_rate: PowerSeries,
}

impl WalkSeries {
    pub fn gaussian(params: DriftParams, order: usize) -> Self {
        let survival = |side| {
            sparre_andersen_survival(&gaussian_sign_probabilities(params, side, order))
                .expect("gaussian sign probabilities lie in [0, 1]")
        };
        let q_plus = survival(Side::Positive);
        let q_minus = survival(Side::Negative);
        let f_plus = first_passage_from_survival(&q_plus).expect("q(0) = 1");
        let f_minus = first_passage_from_survival(&q_minus).expect("q(0) = 1");
        let mean_records = mean_record_series(&q_minus).expect("q(0) = 1");
        let record_rate = record_rate_from_mean(&mean_records);
        Self {
            params,
            q_plus,
            q_minus,
            f_plus,
            f_minus,
            mean_records,
            record_rate,
        }
    }

    pub fn survival(&self, side: Side) -> &PowerSeries {
        match side {
            Side::Positive => &self.q_plus,
            Side::Negative => &self.q_minus,
        }
    }

    pub fn first_passage(&self, side: Side) -> &PowerSeries {
        match side {
            Side::Positive => &self.f_plus,
            Side::Negative => &self.f_minus,
        }
    }

    pub fn record_distributions(&self) -> RecordDistributions {
        RecordDistributions::new(&self.f_minus, &self.q_minus).expect("validated at construction")
    }
}
