//! Growth-rate fitting shared by every entropy estimator.
//!
//! All estimators reduce to the same measurement: the exponential growth rate
//! of a non-negative sequence `v(n)`. The rate is the least-squares slope of
//! `log⁺ v(n)` against `n` over the last half of the sampled points, where
//! transients from non-dominant modes have decayed.

use serde::Serialize;

use crate::error::{Error, Result};

/// A growth-rate measurement in natural-log units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyEstimate {
    /// Entropy, `ln(growth_factor)`.
    pub value: f64,
    pub growth_factor: f64,
    /// Inclusive range of `n` (or `k`) used for the fit.
    pub fit_window: (usize, usize),
    /// RMS deviation of the fitted log-series from the fitted line.
    pub residual: f64,
    /// Raw least-squares slope over the window. Equals `value` for purely
    /// fitted estimates; matrix estimators report the exact limit in `value`
    /// and keep the windowed slope here as a cross-check.
    pub fit_slope: f64,
}

impl EntropyEstimate {
    pub fn zero(fit_window: (usize, usize)) -> Self {
        EntropyEstimate {
            value: 0.0,
            growth_factor: 1.0,
            fit_window,
            residual: 0.0,
            fit_slope: 0.0,
        }
    }

    pub fn from_growth_factor(
        growth_factor: f64,
        fit_window: (usize, usize),
        residual: f64,
        fit_slope: f64,
    ) -> Self {
        EntropyEstimate {
            value: growth_factor.ln(),
            growth_factor,
            fit_window,
            residual,
            fit_slope,
        }
    }

    /// Entropy in bits.
    pub fn base2(&self) -> f64 {
        self.value / std::f64::consts::LN_2
    }
}

/// `log⁺(0) = 0`, `log⁺(x) = ln x` otherwise.
pub fn log_plus(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.ln()
    }
}

/// Least-squares line through `(x, y)`; returns `(slope, intercept, rms)`.
///
/// A constant `y` series gives a slope of exactly zero.
pub fn least_squares(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let m = points.len() as f64;
    let y0 = points.first().map_or(0.0, |p| p.1);
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = y0 + points.iter().map(|p| p.1 - y0).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss: f64 = points
        .iter()
        .map(|p| {
            let e = p.1 - (intercept + slope * p.0);
            e * e
        })
        .sum();
    (slope, intercept, (ss / m).sqrt())
}

/// The last half (rounded up, at least two points) of a sorted series.
fn upper_half(series: &[(usize, f64)]) -> &[(usize, f64)] {
    let keep = series.len().div_ceil(2).max(2).min(series.len());
    &series[series.len() - keep..]
}

fn checked_series(counts: &[(usize, f64)]) -> Result<Vec<(usize, f64)>> {
    if counts.len() < 4 {
        return Err(Error::Input(format!(
            "growth fit needs at least 4 points, got {}",
            counts.len()
        )));
    }
    let mut series = counts.to_vec();
    series.sort_by_key(|p| p.0);
    if series.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Input("duplicate n in growth series".into()));
    }
    if let Some(bad) = series.iter().find(|p| !(p.1 >= 0.0) || !p.1.is_finite()) {
        return Err(Error::Input(format!(
            "invalid value {} at n = {}",
            bad.1, bad.0
        )));
    }
    Ok(series)
}

pub(crate) fn fit_with(
    series: &[(usize, f64)],
    log: impl Fn(f64) -> f64,
) -> (f64, (usize, usize), f64) {
    let window = upper_half(series);
    let pts: Vec<(f64, f64)> = window.iter().map(|&(n, v)| (n as f64, log(v))).collect();
    let (slope, _, rms) = least_squares(&pts);
    (slope, (window[0].0, window[window.len() - 1].0), rms)
}

/// Growth rate of a count sequence with the `log⁺` convention.
///
/// A negative slope means the counts stay bounded or decay; the
/// `lim (1/n) log⁺` of such a sequence is zero, so the value is clamped there.
pub fn growth_rate_fit(counts: &[(usize, f64)]) -> Result<EntropyEstimate> {
    let series = checked_series(counts)?;
    let (slope, window, rms) = fit_with(&series, log_plus);
    let value = slope.max(0.0);
    Ok(EntropyEstimate {
        value,
        growth_factor: value.exp(),
        fit_window: window,
        residual: rms,
        fit_slope: slope,
    })
}

/// Growth rate of a strictly positive real sequence (lengths, volumes), plain
/// natural log, no clamping.
pub fn volume_growth_fit(values: &[(usize, f64)]) -> Result<EntropyEstimate> {
    let series = checked_series(values)?;
    if let Some(bad) = series.iter().find(|p| p.1 <= 0.0) {
        return Err(Error::Input(format!(
            "non-positive volume at n = {}",
            bad.0
        )));
    }
    let (slope, window, rms) = fit_with(&series, f64::ln);
    Ok(EntropyEstimate {
        value: slope,
        growth_factor: slope.exp(),
        fit_window: window,
        residual: rms,
        fit_slope: slope,
    })
}
