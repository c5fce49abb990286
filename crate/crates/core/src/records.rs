//! Upper and lower records of a real-valued sequence.
//!
//! Entry `n > 0` is an upper record when it is strictly greater than every
//! earlier entry, and a lower record when it is strictly smaller. A repeated
//! maximum is not a new record. Entry 0 is both an upper and a lower record,
//! so every cumulative count starts at 1.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecordError {
    #[error("empty series")]
    EmptySeries,
    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("no tallies supplied")]
    NoTallies,
    #[error("tally {index} covers {len} entries, need at least {needed}")]
    TooShort {
        index: usize,
        len: usize,
        needed: usize,
    },
}

/// Record times and cumulative record counts of one sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordTally {
    upper_times: Vec<usize>,
    lower_times: Vec<usize>,
    upper_counts: Vec<usize>,
    lower_counts: Vec<usize>,
}

impl RecordTally {
    /// Indices of the upper records, in increasing order. Always starts with 0.
    pub fn upper_times(&self) -> &[usize] {
        &self.upper_times
    }

    pub fn lower_times(&self) -> &[usize] {
        &self.lower_times
    }

    /// `upper_counts()[n]` is the number of upper records among entries `0..=n`.
    pub fn upper_counts(&self) -> &[usize] {
        &self.upper_counts
    }

    pub fn lower_counts(&self) -> &[usize] {
        &self.lower_counts
    }

    /// Length of the tallied sequence.
    pub fn len(&self) -> usize {
        self.upper_counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper_counts.is_empty()
    }

    /// Total number of upper records.
    pub fn upper_total(&self) -> usize {
        self.upper_times.len()
    }

    pub fn lower_total(&self) -> usize {
        self.lower_times.len()
    }

    pub fn is_upper_record(&self, n: usize) -> bool {
        self.upper_times.binary_search(&n).is_ok()
    }

    pub fn is_lower_record(&self, n: usize) -> bool {
        self.lower_times.binary_search(&n).is_ok()
    }
}

/// Tallies the upper and lower records of `series`.
pub fn count_records(series: &[f64]) -> Result<RecordTally, RecordError> {
    let (&first, rest) = series.split_first().ok_or(RecordError::EmptySeries)?;
    if let Some((index, &value)) = series.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(RecordError::NonFinite { index, value });
    }

    let mut tally = RecordTally {
        upper_times: vec![0],
        lower_times: vec![0],
        upper_counts: Vec::with_capacity(series.len()),
        lower_counts: Vec::with_capacity(series.len()),
    };
    tally.upper_counts.push(1);
    tally.lower_counts.push(1);

    let (mut max, mut min) = (first, first);
    for (offset, &value) in rest.iter().enumerate() {
        let n = offset + 1;
        if value > max {
            max = value;
            tally.upper_times.push(n);
        }
        if value < min {
            min = value;
            tally.lower_times.push(n);
        }
        tally.upper_counts.push(tally.upper_times.len());
        tally.lower_counts.push(tally.lower_times.len());
    }
    Ok(tally)
}

/// Per-step fraction of series with a record at that step.
#[derive(Debug, Clone, PartialEq)]
pub struct RateProfile {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

/// Empirical record rate at steps `0..=n_max` over a collection of tallies.
pub fn record_rate_profile(
    tallies: &[RecordTally],
    n_max: usize,
) -> Result<RateProfile, RecordError> {
    if tallies.is_empty() {
        return Err(RecordError::NoTallies);
    }
    if let Some((index, t)) = tallies.iter().enumerate().find(|(_, t)| t.len() <= n_max) {
        return Err(RecordError::TooShort {
            index,
            len: t.len(),
            needed: n_max + 1,
        });
    }

    let mut upper = vec![0usize; n_max + 1];
    let mut lower = vec![0usize; n_max + 1];
    for t in tallies {
        for &n in t.upper_times.iter().take_while(|&&n| n <= n_max) {
            upper[n] += 1;
        }
        for &n in t.lower_times.iter().take_while(|&&n| n <= n_max) {
            lower[n] += 1;
        }
    }
    let total = tallies.len() as f64;
    Ok(RateProfile {
        upper: upper.into_iter().map(|k| k as f64 / total).collect(),
        lower: lower.into_iter().map(|k| k as f64 / total).collect(),
    })
}
