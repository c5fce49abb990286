//! Record statistics of one-dimensional random walks with drift.
//!
//! - [`records`]: upper and lower records of a sequence.
//! - [`analytic`]: closed-form and asymptotic expressions.
//! - [`series`]: exact statistics from truncated generating functions.
//! - [`montecarlo`]: reproducible parallel simulation.
//! - [`findata`]: daily price series, detrending and record counts.

pub mod analytic;
pub mod findata;
pub mod montecarlo;
pub mod records;
pub mod series;

pub use analytic::{DriftParams, Side};
pub use montecarlo::{JumpDist, SimConfig, SimEstimate};
pub use records::{count_records, RecordTally};
pub use series::PowerSeries;

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is `None`. Results do not depend on the worker count.
#[cfg(feature = "parallel")]
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}
