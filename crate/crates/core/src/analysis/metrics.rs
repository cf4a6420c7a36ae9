// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use super::TimeSeries;
use crate::error::{Error, Result};

/// Integrated error with per-channel detail.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegratedError {
    pub value: f64,
    /// `(channel, ∫(O - O^A)^2 / ∫O^2)` for every channel that contributed.
    pub per_channel: Vec<(String, f64)>,
    /// Channels whose reference norm `∫O^2` is zero.
    pub excluded: Vec<String>,
}

/// A reference channel whose norm `∫O^2` is below this fraction of the
/// largest channel's counts as zero: its values are rounding noise (RMS
/// amplitude under 1e-12 of the dominant channel), and dividing by it
/// would make the metric meaningless.
pub const ZERO_NORM_FRACTION: f64 = 1e-24;

fn trapezoid(times: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    times
        .windows(2)
        .enumerate()
        .map(|(i, w)| 0.5 * (f(i) + f(i + 1)) * (w[1] - w[0]))
        .sum()
}

fn check_grids(exact: &TimeSeries, approx: &TimeSeries) -> Result<()> {
    if exact.times.len() != approx.times.len() {
        return Err(Error::precondition(
            "analysis",
            format!("grid mismatch: {} vs {} samples", exact.times.len(), approx.times.len()),
        ));
    }
    let span = exact.times.last().copied().unwrap_or(0.0).abs().max(1.0);
    for (a, b) in exact.times.iter().zip(&approx.times) {
        if (a - b).abs() > 1e-9 * span {
            return Err(Error::precondition(
                "analysis",
                format!("grid mismatch at t = {a} vs {b}"),
            ));
        }
    }
    Ok(())
}

/// `sqrt( sum_j ∫(O_j - O_j^A)^2 dt / ∫O_j^2 dt )` with trapezoidal
/// quadrature on the shared grid. Channels of `exact` are matched by name.
pub fn integrated_error_report(exact: &TimeSeries, approx: &TimeSeries) -> Result<IntegratedError> {
    check_grids(exact, approx)?;
    let denoms: Vec<f64> = exact
        .channels
        .iter()
        .map(|r| trapezoid(&exact.times, |i| r[i] * r[i]))
        .collect();
    let floor = ZERO_NORM_FRACTION * denoms.iter().copied().fold(0.0, f64::max);
    let mut total = 0.0;
    let mut per_channel = Vec::new();
    let mut excluded = Vec::new();
    for ((name, reference), &denom) in exact.names.iter().zip(&exact.channels).zip(&denoms) {
        let other = approx.channel(name).ok_or_else(|| {
            Error::precondition("analysis", format!("channel {name} missing from approximate series"))
        })?;
        if !(denom > floor) {
            excluded.push(name.clone());
            continue;
        }
        let numer = trapezoid(&exact.times, |i| (reference[i] - other[i]).powi(2));
        let ratio = numer / denom;
        total += ratio;
        per_channel.push((name.clone(), ratio));
    }
    if per_channel.is_empty() {
        return Err(Error::precondition(
            "analysis",
            "no channel with nonzero reference norm",
        ));
    }
    Ok(IntegratedError {
        value: total.sqrt(),
        per_channel,
        excluded,
    })
}

pub fn integrated_error(exact: &TimeSeries, approx: &TimeSeries) -> Result<f64> {
    let report = integrated_error_report(exact, approx)?;
    if !report.excluded.is_empty() {
        log::info!("integrated error: excluded zero-norm channels {:?}", report.excluded);
    }
    Ok(report.value)
}
