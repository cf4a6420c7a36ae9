// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::uniform_step;
use crate::error::{Error, Result};
use crate::C64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    #[default]
    None,
    Hann,
}

/// One-sided power spectrum `|FFT{x}|^2` for bins `0..=n/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSpectrum {
    /// Angular frequencies `2 pi k / (n dt)`.
    pub omega: Vec<f64>,
    pub power: Vec<f64>,
    /// Length of the transformed series.
    pub n_samples: usize,
}

impl PowerSpectrum {
    /// `(1/n) sum_k |X_k|^2` over the full two-sided spectrum; equals the
    /// time-domain sum of squares of the (windowed) input.
    pub fn total_power(&self) -> f64 {
        let n = self.n_samples;
        let mut sum = 0.0;
        for (k, &p) in self.power.iter().enumerate() {
            let mirrored = k != 0 && !(n % 2 == 0 && k == n / 2);
            sum += if mirrored { 2.0 * p } else { p };
        }
        sum / n as f64
    }

    pub fn bin_width(&self) -> f64 {
        self.omega.get(1).copied().unwrap_or(0.0)
    }
}

pub fn power_spectrum(times: &[f64], values: &[f64], window: Window) -> Result<PowerSpectrum> {
    let n = values.len();
    if n < 8 || times.len() != n {
        return Err(Error::precondition(
            "analysis",
            "power spectrum needs >= 8 samples on a matching grid",
        ));
    }
    let dt =
        uniform_step(times).ok_or_else(|| Error::precondition("analysis", "power spectrum needs a uniform grid"))?;
    let mut buf: Vec<C64> = values
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let w = match window {
                Window::None => 1.0,
                Window::Hann => 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos(),
            };
            C64::new(x * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    let d_omega = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    Ok(PowerSpectrum {
        omega: (0..=half).map(|k| k as f64 * d_omega).collect(),
        power: buf[..=half].iter().map(|z| z.norm_sqr()).collect(),
        n_samples: n,
    })
}

/// Relative tolerance under which two bins count as tied.
const TIE_TOL: f64 = 1e-9;

/// Frequency of the strongest nonzero bin. Ties (within a relative 1e-9)
/// go to the lower frequency.
pub fn fundamental_frequency(s: &PowerSpectrum) -> Result<f64> {
    let mut best: Option<(usize, f64)> = None;
    for (k, &p) in s.power.iter().enumerate().skip(1) {
        match best {
            Some((_, b)) if p <= b * (1.0 + TIE_TOL) => {}
            _ => best = Some((k, p)),
        }
    }
    match best {
        Some((k, p)) if p > 0.0 => Ok(s.omega[k]),
        _ => Err(Error::precondition(
            "analysis",
            "spectrum has no nonzero-frequency power",
        )),
    }
}
