//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each export is a thin wrapper over a plain function in [`curves`], which
//! is what the native tests exercise. Arrays cross the boundary as
//! `Float64Array`; errors become JS exceptions with the message text.

pub mod curves;

use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

/// Exact record rate `P_0..P_{n_max}` for Gaussian jumps.
#[wasm_bindgen]
pub fn exact_record_rate(c_over_sigma: f64, n_max: usize) -> Result<Vec<f64>, JsError> {
    curves::exact_record_rate(c_over_sigma, n_max).map_err(js_err)
}

/// Small-drift approximation of the record rate, `NaN` at `n = 0`.
#[wasm_bindgen]
pub fn approx_record_rate(c_over_sigma: f64, n_max: usize) -> Result<Vec<f64>, JsError> {
    curves::approx_record_rate(c_over_sigma, n_max).map_err(js_err)
}

/// Monte Carlo record rate: first `n_steps + 1` entries are estimates, the
/// next `n_steps + 1` their standard errors.
#[wasm_bindgen]
pub fn simulate_record_rate(
    c_over_sigma: f64,
    n_steps: usize,
    walks: u32,
    seed: u32,
    uniform: bool,
) -> Result<Vec<f64>, JsError> {
    let est = curves::simulate_record_rate(c_over_sigma, n_steps, walks.into(), seed.into(), uniform).map_err(js_err)?;
    Ok(est.values.into_iter().chain(est.errors).collect())
}

/// `Pi(m, n)` for `m = 1..=n+1`.
#[wasm_bindgen]
pub fn record_number_distribution(c_over_sigma: f64, n: usize) -> Result<Vec<f64>, JsError> {
    curves::record_number_distribution(c_over_sigma, n).map_err(js_err)
}
