// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

/// Wall-clock breakdown of a run, in seconds.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub setup: f64,
    pub propagate: f64,
    pub truncate: f64,
    pub observe: f64,
    pub total: f64,
}

/// Provenance attached to a time series.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunMeta {
    pub solver: String,
    pub model: String,
    pub params: serde_json::Value,
    pub timings: Timings,
}

/// Observable expectations sampled on a uniform time grid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub names: Vec<String>,
    /// `channels[c][t]`.
    pub channels: Vec<Vec<f64>>,
    /// Standard error of the mean per channel and sample, for stochastic
    /// solvers.
    pub std_errors: Option<Vec<Vec<f64>>>,
    pub meta: RunMeta,
}

impl TimeSeries {
    /// Channels are zero-filled to the length of `times`.
    pub fn new(times: Vec<f64>, names: Vec<String>) -> Self {
        let channels = vec![vec![0.0; times.len()]; names.len()];
        TimeSeries {
            times,
            names,
            channels,
            std_errors: None,
            meta: RunMeta::default(),
        }
    }

    pub fn empty(names: Vec<String>) -> Self {
        Self::new(Vec::new(), names)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn push(&mut self, time: f64, values: &[f64]) {
        assert_eq!(
            values.len(),
            self.names.len(),
            "sample width does not match channel count"
        );
        self.times.push(time);
        for (c, &v) in self.channels.iter_mut().zip(values) {
            c.push(v);
        }
    }

    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.channels[i].as_slice())
    }

    /// New series restricted to the named channels, in the given order.
    pub fn select(&self, names: &[&str]) -> Option<TimeSeries> {
        let mut out = TimeSeries::new(self.times.clone(), names.iter().map(|s| s.to_string()).collect());
        for (slot, name) in names.iter().enumerate() {
            out.channels[slot] = self.channel(name)?.to_vec();
        }
        out.meta = self.meta.clone();
        Some(out)
    }
}

/// Common spacing of `times`, if it is uniform to a relative 1e-9.
pub fn uniform_step(times: &[f64]) -> Option<f64> {
    if times.len() < 2 {
        return None;
    }
    let dt = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(dt > 0.0) {
        return None;
    }
    let uniform = times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.max(1e-300) + 1e-12 * w[1].abs());
    uniform.then_some(dt)
}
