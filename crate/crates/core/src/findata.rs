//! Daily price series: loading, log-price detrending, drift estimation and
//! record counting over whole series or disjoint windows.
//!
//! Steps are trading-day indices; calendar gaps are ignored.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use chrono::{Datelike, Duration, NaiveDate, Weekday};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::montecarlo::realization_rng;
use crate::records::count_records;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: non-positive close {close} for {ticker} on {date}")]
    NonPositivePrice {
        line: u64,
        ticker: String,
        date: NaiveDate,
        close: f64,
    },
    #[error("duplicate row for {ticker} on {date}")]
    Duplicate { ticker: String, date: NaiveDate },
    #[error("series {ticker}: {message}")]
    InvalidSeries { ticker: String, message: String },
    #[error("need at least 3 points to fit a trend, got {0}")]
    TooShortForFit(usize),
    #[error("window length {window_len} invalid for series of length {len}")]
    BadWindow { window_len: usize, len: usize },
    #[error("no series to analyze")]
    NoSeries,
    #[error("no non-degenerate fits")]
    NoUsableFits,
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

/// Dated closing prices of one ticker.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriceSeries {
    ticker: String,
    dates: Vec<NaiveDate>,
    closes: Vec<f64>,
}

impl PriceSeries {
    pub fn new(ticker: impl Into<String>, dates: Vec<NaiveDate>, closes: Vec<f64>) -> Result<Self, DataError> {
        let ticker = ticker.into();
        let invalid = |message: String| DataError::InvalidSeries {
            ticker: ticker.clone(),
            message,
        };
        if dates.len() != closes.len() {
            return Err(invalid(format!("{} dates but {} closes", dates.len(), closes.len())));
        }
        if dates.len() < 2 {
            return Err(invalid("fewer than 2 entries".into()));
        }
        if let Some(w) = dates.windows(2).find(|w| w[1] <= w[0]) {
            return Err(invalid(format!("dates not strictly increasing at {}", w[1])));
        }
        if let Some((d, c)) = dates.iter().zip(&closes).find(|(_, c)| !(c.is_finite() && **c > 0.0)) {
            return Err(invalid(format!("non-positive close {c} on {d}")));
        }
        Ok(Self { ticker, dates, closes })
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn closes(&self) -> &[f64] {
        &self.closes
    }

    pub fn len(&self) -> usize {
        self.closes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.closes.is_empty()
    }

    /// Same series with every close multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Self {
        Self {
            closes: self.closes.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Deserialize)]
struct PriceRow {
    date: String,
    ticker: String,
    close: String,
}

/// Reads `date,ticker,close` CSV (header required, rows in any order).
/// Tickers with fewer than `min_rows` rows are dropped with a warning.
/// The result is ordered by ticker.
pub fn read_prices<R: Read>(reader: R, min_rows: usize) -> Result<Vec<PriceSeries>, DataError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut by_ticker: BTreeMap<String, BTreeMap<NaiveDate, f64>> = BTreeMap::new();
    let headers = rdr
        .headers()
        .map_err(|e| DataError::Malformed {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let mut record = csv::StringRecord::new();
    loop {
        let more = rdr.read_record(&mut record).map_err(|e| DataError::Malformed {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        if !more {
            break;
        }
        let line = record.position().map_or(0, |p| p.line());
        let row: PriceRow = record
            .deserialize(Some(&headers))
            .map_err(|e| DataError::Malformed {
                line,
                message: e.to_string(),
            })?;
        let malformed = |message: String| DataError::Malformed { line, message };
        if row.ticker.is_empty() {
            return Err(malformed("empty ticker".into()));
        }
        let date = NaiveDate::parse_from_str(&row.date, "%Y-%m-%d")
            .map_err(|e| malformed(format!("bad date {:?}: {e}", row.date)))?;
        let close: f64 = row
            .close
            .parse()
            .map_err(|e| malformed(format!("bad close {:?}: {e}", row.close)))?;
        if !close.is_finite() {
            return Err(malformed(format!("bad close {:?}", row.close)));
        }
        if close <= 0.0 {
            return Err(DataError::NonPositivePrice {
                line,
                ticker: row.ticker,
                date,
                close,
            });
        }
        let rows = by_ticker.entry(row.ticker.clone()).or_default();
        if rows.insert(date, close).is_some() {
            return Err(DataError::Duplicate { ticker: row.ticker, date });
        }
    }

    let mut out = Vec::with_capacity(by_ticker.len());
    for (ticker, rows) in by_ticker {
        if rows.len() < min_rows.max(2) {
            log::warn!("dropping {ticker}: {} rows, need {}", rows.len(), min_rows.max(2));
            continue;
        }
        let (dates, closes) = rows.into_iter().unzip();
        out.push(PriceSeries::new(ticker, dates, closes)?);
    }
    Ok(out)
}

/// [`read_prices`] from a file.
pub fn load_prices(path: impl AsRef<Path>, min_rows: usize) -> Result<Vec<PriceSeries>, DataError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_prices(std::io::BufReader::new(file), min_rows)
}

/// Writes series in the `date,ticker,close` schema accepted by [`read_prices`].
pub fn write_prices<W: Write>(writer: W, series: &[PriceSeries]) -> Result<(), DataError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["date", "ticker", "close"])?;
    for s in series {
        for (d, c) in s.dates.iter().zip(&s.closes) {
            w.write_record([d.format("%Y-%m-%d").to_string(), s.ticker.clone(), format!("{c}")])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn log_transform(p: &PriceSeries) -> Vec<f64> {
    p.closes.iter().map(|c| c.ln()).collect()
}

/// How the per-step standard deviation of a fit is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaMode {
    /// First differences of the raw log prices.
    Raw,
    /// First differences of the detrended residuals.
    #[default]
    Detrended,
}

/// Least-squares line through a log-price series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetrendFit {
    /// Fitted drift per step.
    pub c_hat: f64,
    pub intercept: f64,
    /// Sample standard deviation (denominator `n-1`) of the per-step increments.
    pub sigma_hat: f64,
    /// `logp - (intercept + c_hat * index)`.
    pub residuals: Vec<f64>,
    /// The increments have (numerically) zero spread; `sigma_hat` is set to 0.
    pub degenerate: bool,
}

impl DetrendFit {
    pub fn normalized_drift(&self) -> Option<f64> {
        (!self.degenerate).then(|| self.c_hat / self.sigma_hat)
    }
}

fn ols(y: &[f64]) -> (f64, f64) {
    let n = y.len() as f64;
    let t_mean = (n - 1.0) / 2.0;
    let y_mean = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (k, &v) in y.iter().enumerate() {
        let dt = k as f64 - t_mean;
        sxy += dt * (v - y_mean);
        sxx += dt * dt;
    }
    let slope = sxy / sxx;
    (slope, y_mean - slope * t_mean)
}

fn sample_std(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let (count, sum) = values.clone().fold((0usize, 0.0), |(k, s), v| (k + 1, s + v));
    let mean = sum / count as f64;
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (ss / (count as f64 - 1.0)).sqrt()
}

/// Ordinary least squares of `logp` against the index `0..n`.
///
/// Both sigma modes take the sample standard deviation of first differences.
/// Detrended increments differ from raw ones by the constant `c_hat`, which
/// the mean subtraction removes, so the two modes agree up to rounding.
pub fn fit_linear_trend(logp: &[f64], mode: SigmaMode) -> Result<DetrendFit, DataError> {
    if logp.len() < 3 {
        return Err(DataError::TooShortForFit(logp.len()));
    }
    let (slope, intercept) = ols(logp);
    let residuals: Vec<f64> = logp
        .iter()
        .enumerate()
        .map(|(k, &v)| v - (intercept + slope * k as f64))
        .collect();
    let sigma_hat = match mode {
        SigmaMode::Raw => sample_std(logp.windows(2).map(|w| w[1] - w[0])),
        SigmaMode::Detrended => sample_std(residuals.windows(2).map(|w| w[1] - w[0])),
    };
    let scale = logp.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    // NaN counts as degenerate
    let degenerate = sigma_hat.is_nan() || sigma_hat <= 1e-12 * scale;
    Ok(DetrendFit {
        c_hat: slope,
        intercept,
        sigma_hat: if degenerate { 0.0 } else { sigma_hat },
        residuals,
        degenerate,
    })
}

/// Per-step mean record counts over an ensemble of series or windows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleRecordReport {
    /// Mean number of upper records among entries `0..=n`, for `n < horizon`.
    pub mean_upper: Vec<f64>,
    pub mean_lower: Vec<f64>,
    /// Tickers contributing.
    pub n_tickers: usize,
    /// Sequences averaged over (tickers, or tickers times windows).
    pub n_sequences: usize,
    pub horizon: usize,
}

impl EnsembleRecordReport {
    pub fn final_upper(&self) -> f64 {
        *self.mean_upper.last().expect("horizon >= 1")
    }

    pub fn final_lower(&self) -> f64 {
        *self.mean_lower.last().expect("horizon >= 1")
    }
}

/// Integer sums of cumulative record counts, merged by addition.
#[derive(Debug, Clone)]
struct CountSums {
    upper: Vec<u64>,
    lower: Vec<u64>,
    sequences: usize,
}

impl CountSums {
    fn new(horizon: usize) -> Self {
        Self {
            upper: vec![0; horizon],
            lower: vec![0; horizon],
            sequences: 0,
        }
    }

    fn add_sequence(&mut self, values: &[f64]) {
        let t = count_records(&values[..self.upper.len()]).expect("finite log prices");
        for (acc, &k) in self.upper.iter_mut().zip(t.upper_counts()) {
            *acc += k as u64;
        }
        for (acc, &k) in self.lower.iter_mut().zip(t.lower_counts()) {
            *acc += k as u64;
        }
        self.sequences += 1;
    }

    fn merge(mut self, other: CountSums) -> CountSums {
        self.upper.iter_mut().zip(&other.upper).for_each(|(a, b)| *a += b);
        self.lower.iter_mut().zip(&other.lower).for_each(|(a, b)| *a += b);
        self.sequences += other.sequences;
        self
    }

    fn report(self, n_tickers: usize) -> EnsembleRecordReport {
        let k = self.sequences as f64;
        EnsembleRecordReport {
            horizon: self.upper.len(),
            mean_upper: self.upper.iter().map(|&s| s as f64 / k).collect(),
            mean_lower: self.lower.iter().map(|&s| s as f64 / k).collect(),
            n_tickers,
            n_sequences: self.sequences,
        }
    }
}

fn map_reduce<T, A>(items: &[T], init: impl Fn() -> A + Sync + Send, f: impl Fn(&mut A, &T) + Sync + Send, merge: fn(A, A) -> A) -> A
where
    T: Sync,
    A: Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items
            .par_iter()
            .fold(&init, |mut acc, item| {
                f(&mut acc, item);
                acc
            })
            .reduce(&init, merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = merge;
        let mut acc = init();
        items.iter().for_each(|item| f(&mut acc, item));
        acc
    }
}

/// Raw and detrended record reports for a set of series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecordAnalysis {
    pub raw: EnsembleRecordReport,
    pub detrended: EnsembleRecordReport,
}

/// Counts records of every ticker's log prices, before and after removing
/// its fitted linear trend. Series of unequal length are compared up to the
/// shortest one.
pub fn detrended_record_counts(series: &[PriceSeries]) -> Result<RecordAnalysis, DataError> {
    let horizon = series.iter().map(PriceSeries::len).min().ok_or(DataError::NoSeries)?;
    if let Some(s) = series.iter().find(|s| s.len() < 3) {
        return Err(DataError::TooShortForFit(s.len()));
    }
    let (raw, detrended) = map_reduce(
        series,
        || (CountSums::new(horizon), CountSums::new(horizon)),
        |(raw, det), s| {
            let logp = log_transform(s);
            raw.add_sequence(&logp);
            let fit = fit_linear_trend(&logp, SigmaMode::Detrended).expect("length checked");
            det.add_sequence(&fit.residuals);
        },
        |a, b| (a.0.merge(b.0), a.1.merge(b.1)),
    );
    Ok(RecordAnalysis {
        raw: raw.report(series.len()),
        detrended: detrended.report(series.len()),
    })
}

/// Fits every ticker's log prices.
pub fn fit_all(series: &[PriceSeries], mode: SigmaMode) -> Result<Vec<DetrendFit>, DataError> {
    series.iter().map(|s| fit_linear_trend(&log_transform(s), mode)).collect()
}

/// Ensemble average of `c_hat / sigma_hat`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DriftSummary {
    pub mean: f64,
    /// Standard error of the mean over tickers.
    pub std_error: f64,
    pub n_used: usize,
    pub n_degenerate: usize,
}

/// Mean of `c_hat / sigma_hat` over the non-degenerate fits.
pub fn normalized_drift_average(fits: &[DetrendFit]) -> Result<DriftSummary, DataError> {
    let ratios: Vec<f64> = fits.iter().filter_map(DetrendFit::normalized_drift).collect();
    if ratios.is_empty() {
        return Err(DataError::NoUsableFits);
    }
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let std_error = if ratios.len() > 1 {
        sample_std(ratios.iter().copied()) / n.sqrt()
    } else {
        0.0
    };
    Ok(DriftSummary {
        mean,
        std_error,
        n_used: ratios.len(),
        n_degenerate: fits.len() - ratios.len(),
    })
}

/// Splits each log series into `len / window_len` disjoint consecutive
/// windows (a remainder tail is dropped), detrends each window on its own and
/// averages record counts over all windows of all tickers. Window start is
/// step 0.
pub fn windowed_analysis(series: &[PriceSeries], window_len: usize) -> Result<EnsembleRecordReport, DataError> {
    if series.is_empty() {
        return Err(DataError::NoSeries);
    }
    for s in series {
        if window_len < 3 || window_len > s.len() {
            return Err(DataError::BadWindow { window_len, len: s.len() });
        }
    }
    let sums = map_reduce(
        series,
        || CountSums::new(window_len),
        |acc, s| {
            let logp = log_transform(s);
            for window in logp.chunks_exact(window_len) {
                let fit = fit_linear_trend(window, SigmaMode::Detrended).expect("window_len >= 3");
                acc.add_sequence(&fit.residuals);
            }
        },
        CountSums::merge,
    );
    Ok(sums.report(series.len()))
}

/// Parameters of the synthetic price ensemble.
///
/// Ticker `i` is a geometric Gaussian walk: log price increments are
/// `N(c_i, sigma_i^2)` with `sigma_i` uniform in `[0.01, 0.03]` and
/// `c_i / sigma_i = mean_ratio * (1 + u_i)`, `u_i` uniform in
/// `[-ratio_spread, ratio_spread]`. Each ticker draws from its own random
/// stream (stream id = ticker index), so the ensemble only depends on the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_tickers: usize,
    /// Prices per ticker.
    pub n_steps: usize,
    pub mean_ratio: f64,
    pub ratio_spread: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub const DEFAULT_SPREAD: f64 = 0.2;

    pub fn new(n_tickers: usize, n_steps: usize, mean_ratio: f64, seed: u64) -> Self {
        Self {
            n_tickers,
            n_steps,
            mean_ratio,
            ratio_spread: Self::DEFAULT_SPREAD,
            seed,
        }
    }
}

fn trading_days(start: NaiveDate, count: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(count);
    let mut d = start;
    while out.len() < count {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d += Duration::days(1);
    }
    out
}

/// Generates the synthetic ensemble, dated on weekdays from 1990-01-02.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Vec<PriceSeries>, DataError> {
    if spec.n_steps < 2 {
        return Err(DataError::InvalidSeries {
            ticker: "synthetic".into(),
            message: "need at least 2 prices per ticker".into(),
        });
    }
    let dates = trading_days(NaiveDate::from_ymd_opt(1990, 1, 2).expect("valid date"), spec.n_steps);
    (0..spec.n_tickers)
        .map(|i| {
            let mut rng = realization_rng(spec.seed, i as u64);
            let sigma = 0.01 + 0.02 * rng.random::<f64>();
            let u = spec.ratio_spread * (2.0 * rng.random::<f64>() - 1.0);
            let c = spec.mean_ratio * (1.0 + u) * sigma;
            let mut logp = (20.0 + 80.0 * rng.random::<f64>()).ln();
            let closes = (0..spec.n_steps)
                .map(|k| {
                    if k > 0 {
                        logp += c + sigma * rng.sample::<f64, _>(StandardNormal);
                    }
                    logp.exp()
                })
                .collect();
            PriceSeries::new(format!("SYN{i:04}"), dates.clone(), closes)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn day(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
    }

    #[test]
    fn loads_two_rows() {
        let csv = "date,ticker,close\n2001-01-03,ABC,11.5\n2001-01-02,ABC,10\n";
        let s = read_prices(csv.as_bytes(), 2).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].ticker(), "ABC");
        assert_eq!(s[0].dates(), &[day("2001-01-02"), day("2001-01-03")]);
        assert_eq!(s[0].closes(), &[10.0, 11.5]);
    }

    #[test]
    fn rejects_bad_rows() {
        let zero = "date,ticker,close\n2001-01-02,ABC,10\n2001-01-03,ABC,0\n";
        match read_prices(zero.as_bytes(), 2) {
            Err(DataError::NonPositivePrice { line, ticker, date, .. }) => {
                assert_eq!((line, ticker.as_str(), date), (3, "ABC", day("2001-01-03")));
            }
            other => panic!("unexpected {other:?}"),
        }
        let dup = "date,ticker,close\n2001-01-02,ABC,10\n2001-01-02,ABC,11\n";
        assert!(matches!(read_prices(dup.as_bytes(), 2), Err(DataError::Duplicate { .. })));
        let bad_date = "date,ticker,close\n2001-01-02,ABC,10\n01/03/2001,ABC,11\n";
        match read_prices(bad_date.as_bytes(), 2) {
            Err(DataError::Malformed { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let short = "date,ticker,close\n2001-01-02,ABC\n";
        assert!(matches!(read_prices(short.as_bytes(), 2), Err(DataError::Malformed { .. })));
        let nan = "date,ticker,close\n2001-01-02,ABC,NaN\n";
        assert!(matches!(read_prices(nan.as_bytes(), 2), Err(DataError::Malformed { .. })));
        assert!(matches!(load_prices("/nonexistent/prices.csv", 2), Err(DataError::Io { .. })));
    }

    #[test]
    fn drops_short_tickers() {
        let csv = "date,ticker,close\n2001-01-02,A,1\n2001-01-02,B,1\n2001-01-03,B,2\n2001-01-04,B,3\n";
        let s = read_prices(csv.as_bytes(), 3).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].ticker(), "B");
    }

    #[test]
    fn series_validation() {
        assert!(PriceSeries::new("X", vec![day("2001-01-02")], vec![1.0]).is_err());
        assert!(PriceSeries::new("X", vec![day("2001-01-03"), day("2001-01-02")], vec![1.0, 2.0]).is_err());
        assert!(PriceSeries::new("X", vec![day("2001-01-02"), day("2001-01-03")], vec![1.0, -2.0]).is_err());
    }

    #[test]
    fn log_transform_examples() {
        let e = std::f64::consts::E;
        let dates = trading_days(day("2001-01-01"), 3);
        let s = PriceSeries::new("X", dates.clone(), vec![1.0, e, e * e]).unwrap();
        let l = log_transform(&s);
        for (a, b) in l.iter().zip([0.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        let s = PriceSeries::new("X", dates, vec![3.0; 3]).unwrap();
        let l = log_transform(&s);
        assert!(l.iter().all(|&v| v == l[0]));
        for (v, c) in l.iter().zip(s.closes()) {
            assert!((v.exp() - c).abs() / c < 1e-12);
        }
    }

    #[test]
    fn exact_line_fit_is_degenerate() {
        let fit = fit_linear_trend(&[0.0, 0.1, 0.2, 0.3], SigmaMode::Detrended).unwrap();
        assert!((fit.c_hat - 0.1).abs() < 1e-15);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-15));
        assert!(fit.degenerate);
        assert_eq!(fit.sigma_hat, 0.0);
        assert_eq!(fit.normalized_drift(), None);
        let flat = fit_linear_trend(&[2.0; 5], SigmaMode::Raw).unwrap();
        assert!(flat.degenerate && flat.c_hat == 0.0);
        assert!(matches!(fit_linear_trend(&[1.0, 2.0], SigmaMode::Raw), Err(DataError::TooShortForFit(2))));
    }

    #[test]
    fn sigma_modes_agree() {
        let logp = [0.0, 0.3, 0.1, 0.7, 0.6, 1.2, 0.9];
        let raw = fit_linear_trend(&logp, SigmaMode::Raw).unwrap();
        let det = fit_linear_trend(&logp, SigmaMode::Detrended).unwrap();
        assert!((raw.sigma_hat - det.sigma_hat).abs() < 1e-14);
        let incr: Vec<f64> = logp.windows(2).map(|w| w[1] - w[0]).collect();
        let m = incr.iter().sum::<f64>() / 6.0;
        let sd = (incr.iter().map(|v| (v - m).powi(2)).sum::<f64>() / 5.0).sqrt();
        assert!((raw.sigma_hat - sd).abs() < 1e-15);
    }

    #[test]
    fn drift_average_examples() {
        let fit = |c: f64, s: f64| DetrendFit {
            c_hat: c,
            intercept: 0.0,
            sigma_hat: s,
            residuals: vec![],
            degenerate: s == 0.0,
        };
        let s = normalized_drift_average(&[fit(0.025, 1.0), fit(0.05, 2.0)]).unwrap();
        assert!((s.mean - 0.025).abs() < 1e-15);
        let s = normalized_drift_average(&[fit(0.02, 1.0), fit(0.03, 1.0), fit(1.0, 0.0)]).unwrap();
        assert!((s.mean - 0.025).abs() < 1e-15);
        assert_eq!((s.n_used, s.n_degenerate), (2, 1));
        assert!(matches!(normalized_drift_average(&[fit(1.0, 0.0)]), Err(DataError::NoUsableFits)));
    }

    #[test]
    fn increasing_prices_raw_counts() {
        let dates = trading_days(day("2001-01-01"), 6);
        let s = PriceSeries::new("UP", dates, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let a = detrended_record_counts(&[s]).unwrap();
        assert_eq!(a.raw.mean_upper, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(a.raw.final_lower(), 1.0);
        assert_eq!(a.raw.horizon, 6);
    }

    #[test]
    fn window_errors() {
        let dates = trading_days(day("2001-01-01"), 5);
        let s = PriceSeries::new("X", dates, vec![1.0, 2.0, 1.5, 3.0, 2.0]).unwrap();
        assert!(matches!(windowed_analysis(std::slice::from_ref(&s), 6), Err(DataError::BadWindow { .. })));
        assert!(matches!(windowed_analysis(&[s], 2), Err(DataError::BadWindow { .. })));
        assert!(matches!(windowed_analysis(&[], 3), Err(DataError::NoSeries)));
        assert!(matches!(detrended_record_counts(&[]), Err(DataError::NoSeries)));
    }

    #[test]
    fn synthetic_round_trips_through_csv() {
        let spec = SyntheticSpec::new(3, 40, 0.05, 11);
        let series = generate_synthetic(&spec).unwrap();
        assert_eq!(series, generate_synthetic(&spec).unwrap());
        assert!(series.iter().all(|s| s.len() == 40));
        assert!(series[0].dates().iter().all(|d| !matches!(d.weekday(), Weekday::Sat | Weekday::Sun)));
        let mut buf = Vec::new();
        write_prices(&mut buf, &series).unwrap();
        let back = read_prices(buf.as_slice(), 2).unwrap();
        assert_eq!(back.len(), 3);
        for (a, b) in back.iter().zip(&series) {
            assert_eq!(a.ticker(), b.ticker());
            assert_eq!(a.closes(), b.closes());
        }
    }
}
