// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::sync::Mutex;

use super::config::{parse_config, RunConfig, SolverConfig, SCHEMA_VERSION};
use super::output::{series_csv, std_error_csv, sweep_csv, write_atomic};
use crate::analysis::{benchmark_sweep, SweepResult, SweepRow, TimeSeries};
use crate::error::{Error, Result};
use crate::ert::{evolve, ErtConfig};
use crate::kraus::default_dt;
use crate::models::ModelSpec;
use crate::reference::{exact_evolve, wmc_evolve, WmcConfig};

/// Environment variable overriding `memory_cap_bytes`.
pub const MEMORY_CAP_ENV: &str = "ERT_MEMORY_CAP_BYTES";

/// Command-line overrides applied on top of a parsed config.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub memory_cap_bytes: Option<u64>,
}

impl Overrides {
    /// Reads [`MEMORY_CAP_ENV`] unless a cap is already set.
    pub fn with_env(mut self) -> Result<Self> {
        if self.memory_cap_bytes.is_none() {
            if let Ok(v) = std::env::var(MEMORY_CAP_ENV) {
                let bytes = v
                    .trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("{MEMORY_CAP_ENV}={v:?} is not a byte count")))?;
                self.memory_cap_bytes = Some(bytes);
            }
        }
        Ok(self)
    }

    pub fn apply(&self, cfg: &mut RunConfig) {
        if let Some(d) = &self.output_dir {
            cfg.output_dir = d.clone();
        }
        if let Some(b) = self.memory_cap_bytes {
            cfg.memory_cap_bytes = Some(b);
        }
        if let Some(seed) = self.seed {
            if let Some(SolverConfig::Wmc { seed: s, .. }) = &mut cfg.solver {
                *s = seed;
            }
            if let Some(sweep) = &mut cfg.sweep {
                sweep.seed = seed;
            }
        }
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn metadata(cfg: &RunConfig, series_meta: serde_json::Value) -> Result<Vec<u8>> {
    let doc = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "library_version": env!("CARGO_PKG_VERSION"),
        "run": series_meta,
        "config": cfg,
    });
    serde_json::to_vec_pretty(&doc).map_err(|e| Error::Config(format!("metadata serialization failed: {e}")))
}

/// Runs the solver named in `cfg` and returns its series.
pub fn simulate(cfg: &RunConfig, model: &ModelSpec) -> Result<TimeSeries> {
    let solver = cfg
        .solver
        .as_ref()
        .ok_or_else(|| Error::Config("run needs a [solver] table".into()))?;
    let t_final = cfg.t_final.ok_or_else(|| Error::Config("run needs t_final".into()))?;
    let cap = cfg.memory_cap();
    let fallback_dt = || default_dt(&model.hamiltonian, &model.dissipators_or_zero());
    match solver {
        SolverConfig::Exact { dt } => {
            exact_evolve(model, dt.unwrap_or_else(fallback_dt), t_final, cfg.sample_every, cap)
        }
        SolverConfig::Ert {
            rank,
            dt,
            renormalize_trace,
        } => {
            let ert = ErtConfig {
                rank: *rank,
                dt: dt.unwrap_or_else(fallback_dt),
                renormalize_trace: *renormalize_trace,
                memory_cap: cap,
            };
            evolve(model, &ert, t_final, cfg.sample_every)
        }
        SolverConfig::Wmc { n_traj, dt, seed } => {
            let wmc = WmcConfig {
                memory_cap: cap,
                ..WmcConfig::new(*n_traj, *seed, dt.unwrap_or_else(fallback_dt))
            };
            wmc_evolve(model, &wmc, t_final, cfg.sample_every)
        }
    }
}

/// `run`: simulate and write `series.csv` and `meta.json` (plus
/// `series_stderr.csv` for stochastic runs) into `output_dir`.
pub fn run(cfg: &RunConfig) -> Result<TimeSeries> {
    let model = cfg.model.build(cfg.memory_cap())?;
    let series = simulate(cfg, &model)?;
    let dir = &cfg.output_dir;
    write_atomic(&dir.join("series.csv"), series_csv(&series).as_bytes())?;
    if let Some(errors) = std_error_csv(&series) {
        write_atomic(&dir.join("series_stderr.csv"), errors.as_bytes())?;
    }
    let meta = serde_json::to_value(&series.meta).unwrap_or_default();
    write_atomic(&dir.join("meta.json"), &metadata(cfg, meta)?)?;
    log::info!("wrote {}", dir.display());
    Ok(series)
}

/// `sweep`: run the `[sweep]` table, rewriting `sweep.csv` after every
/// completed point so partial results survive an interruption.
pub fn sweep(cfg: &RunConfig) -> Result<SweepResult> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Error::Config("sweep needs a [sweep] table".into()))?;
    let cap = cfg.memory_cap();
    let path = cfg.output_dir.join("sweep.csv");
    let done: Mutex<Vec<SweepRow>> = Mutex::new(Vec::new());
    let write_error: Mutex<Option<Error>> = Mutex::new(None);
    let result = benchmark_sweep(
        spec,
        cap,
        |c| cfg.model.with_coupling(c).build(cap),
        |row| {
            log::info!(
                "{} control={} coupling={} E={:.3e} t={:.3}s",
                row.solver,
                row.control,
                row.coupling,
                row.integrated_error,
                row.wall_seconds
            );
            let mut rows = done.lock().unwrap_or_else(|p| p.into_inner());
            rows.push(row.clone());
            if let Err(e) = write_atomic(&path, sweep_csv(&rows).as_bytes()) {
                *write_error.lock().unwrap_or_else(|p| p.into_inner()) = Some(e);
            }
        },
    )?;
    if let Some(e) = write_error.into_inner().unwrap_or_else(|p| p.into_inner()) {
        return Err(e);
    }
    write_atomic(&path, sweep_csv(&result.rows).as_bytes())?;
    let meta = serde_json::json!({ "solver": "sweep", "rows": result.rows.len() });
    write_atomic(&cfg.output_dir.join("meta.json"), &metadata(cfg, meta)?)?;
    Ok(result)
}
