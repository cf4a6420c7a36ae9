// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! Config-driven runs: TOML in, `series.csv` / `sweep.csv` / `meta.json` out.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 resource cap
//! exceeded, 4 numerical failure.

mod config;
mod output;
mod run;

pub use config::{parse_config, CavityConfig, ModelConfig, RunConfig, SolverConfig, SCHEMA_VERSION};
pub use output::{series_csv, std_error_csv, sweep_csv, write_atomic, SWEEP_HEADER};
pub use run::{load_config, run, simulate, sweep, Overrides, MEMORY_CAP_ENV};
