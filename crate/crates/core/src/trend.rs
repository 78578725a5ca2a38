//! Exponential efficiency-improvement trend, `E(t) = E0 (1 - mu)^(t - t0)`,
//! and its least-squares fit in the log domain.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendParams {
    /// Value at `t0`. The unit is whatever the samples carry.
    pub e0: f64,
    /// Annual improvement rate.
    pub mu: f64,
    /// Reference year.
    pub t0: f64,
}

impl TrendParams {
    pub fn new(e0: f64, mu: f64, t0: f64) -> Result<Self> {
        if !(e0 > 0.0 && e0.is_finite()) {
            return Err(Error::domain(format!("e0 must be positive, got {e0}")));
        }
        if !(0.0..1.0).contains(&mu) {
            return Err(Error::domain(format!("mu must lie in [0, 1), got {mu}")));
        }
        if !t0.is_finite() {
            return Err(Error::domain("t0 must be finite"));
        }
        Ok(Self { e0, mu, t0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrendSample {
    pub year: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub params: TrendParams,
    /// Coefficient of determination of the fit to `ln(value)`.
    pub r_squared: f64,
}

/// Evaluates the trend at year `t`. Years before `t0` back-project.
pub fn project(params: &TrendParams, t: f64) -> f64 {
    params.e0 * (1.0 - params.mu).powf(t - params.t0)
}

/// Ordinary least squares of `ln(value)` against `year - t0`.
///
/// The slope `s` maps to `mu = 1 - exp(s)` so that `project` inverts the fit
/// exactly on noiseless data. A decreasing trend gives `mu` in `(0, 1)`; an
/// increasing one gives a negative `mu`, which is reported as a domain error
/// because the model only describes improvement.
pub fn fit(samples: &[TrendSample], t0: f64) -> Result<FitResult> {
    if let Some(bad) = samples.iter().find(|s| !(s.value > 0.0 && s.value.is_finite())) {
        return Err(Error::domain(format!(
            "sample at year {} has non-positive value {}",
            bad.year, bad.value
        )));
    }
    if samples.iter().any(|s| !s.year.is_finite()) {
        return Err(Error::domain("sample years must be finite"));
    }
    let first = samples.first().map(|s| s.year);
    if samples.len() < 2 || samples.iter().all(|s| Some(s.year) == first) {
        return Err(Error::domain(
            "degenerate fit: at least two distinct years are required",
        ));
    }

    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| s.year - t0).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.value.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;

    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let dx = x - x_mean;
        sxx += dx * dx;
        sxy += dx * (y - y_mean);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;

    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let r = y - (intercept + slope * x);
        ss_res += r * r;
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };

    let mu = 1.0 - slope.exp();
    let params = TrendParams::new(intercept.exp(), mu, t0)
        .map_err(|e| Error::domain(format!("fitted trend is not an improvement trend ({e})")))?;
    Ok(FitResult { params, r_squared })
}
