// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! Error metric, spectra, steady-state extraction and benchmark sweeps.

mod metrics;
mod series;
mod spectrum;
mod steady;
mod sweep;

pub use metrics::{integrated_error, integrated_error_report, IntegratedError, ZERO_NORM_FRACTION};
pub use series::{uniform_step, RunMeta, TimeSeries, Timings};
pub use spectrum::{fundamental_frequency, power_spectrum, PowerSpectrum, Window};
pub use steady::{fit_through_origin, log_log_slope, steady_state_current, DEFAULT_TAIL_FRACTION};
pub use sweep::{benchmark_sweep, SweepResult, SweepRow, SweepSpec};
