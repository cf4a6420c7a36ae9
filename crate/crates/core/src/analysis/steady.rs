// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};

pub const DEFAULT_TAIL_FRACTION: f64 = 0.25;

/// Relative agreement required between the two halves of the tail.
const HALF_AGREEMENT: f64 = 0.05;
const ABS_FLOOR: f64 = 1e-12;

/// Mean of the last `tail_fraction` of `values`. The tail is split in half;
/// the two half-means must agree to 5%, otherwise the series is reported as
/// not converged.
pub fn steady_state_current(values: &[f64], tail_fraction: f64) -> Result<f64> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::precondition("analysis", "tail_fraction must lie in (0, 1]"));
    }
    let n_tail = ((values.len() as f64) * tail_fraction).round() as usize;
    if n_tail < 2 {
        return Err(Error::precondition("analysis", "tail holds fewer than 2 samples"));
    }
    let tail = &values[values.len() - n_tail..];
    if tail.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { module: "analysis" });
    }
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    let (first, second) = tail.split_at(n_tail / 2);
    let (m1, m2) = (mean(first), mean(second));
    if (m1 - m2).abs() > HALF_AGREEMENT * m1.abs().max(m2.abs()) + ABS_FLOOR {
        return Err(Error::numerical(
            "analysis",
            format!("steady state not converged: tail half-means {m1:.6e} and {m2:.6e} differ by more than 5%"),
        ));
    }
    Ok(mean(tail))
}

/// Slope of the least-squares line through the origin, and the relative
/// residual `||y - slope x|| / ||y||`.
pub fn fit_through_origin(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::precondition("analysis", "fit needs equal, nonempty inputs"));
    }
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let syy: f64 = y.iter().map(|v| v * v).sum();
    if !(sxx > 0.0) || !(syy > 0.0) {
        return Err(Error::precondition("analysis", "fit needs nonzero data"));
    }
    let slope = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / sxx;
    let resid: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a).powi(2)).sum();
    Ok((slope, (resid / syy).sqrt()))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::precondition("analysis", "slope needs >= 2 matching points"));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::precondition("analysis", "log-log slope needs positive data"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
