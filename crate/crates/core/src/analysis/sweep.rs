// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{integrated_error, TimeSeries};
use crate::error::{Error, Result};
use crate::ert::{evolve, ErtConfig};
use crate::models::ModelSpec;
use crate::reference::{exact_evolve, wmc_evolve, WmcConfig};
use crate::MemoryCap;

/// Accuracy-versus-runtime sweep over coupling strengths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Coupling values, in units of the model's base rate.
    pub couplings: Vec<f64>,
    pub ranks: Vec<usize>,
    pub n_traj: Vec<usize>,
    pub t_final: f64,
    /// Spacing of the shared observation grid; every solver step must
    /// divide it.
    pub sample_interval: f64,
    pub exact_dt: f64,
    pub ert_dt: f64,
    pub wmc_dt: f64,
    #[serde(default)]
    pub seed: u64,
    /// Channels scored by the integrated error; all when empty.
    #[serde(default)]
    pub channels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    /// `exact`, `ert` or `wmc`.
    pub solver: String,
    /// Rank for ERT, trajectory count for WMC, zero for the exact run.
    pub control: usize,
    pub coupling: f64,
    pub integrated_error: f64,
    pub wall_seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn select<'a>(&'a self, solver: &'a str, coupling: f64) -> impl Iterator<Item = &'a SweepRow> + 'a {
        self.rows
            .iter()
            .filter(move |r| r.solver == solver && r.coupling == coupling)
    }
}

fn steps_per_sample(interval: f64, dt: f64, what: &str) -> Result<usize> {
    let ratio = interval / dt;
    let n = ratio.round();
    if !(n >= 1.0) || (ratio - n).abs() > 1e-9 * ratio {
        return Err(Error::precondition(
            "analysis",
            format!("{what} dt = {dt} does not divide sample_interval = {interval}"),
        ));
    }
    Ok(n as usize)
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.couplings.is_empty() || (self.ranks.is_empty() && self.n_traj.is_empty()) {
            return Err(Error::precondition(
                "analysis",
                "sweep needs couplings and at least one rank or n_traj",
            ));
        }
        if self.couplings.iter().any(|c| !(*c >= 0.0) || !c.is_finite()) {
            return Err(Error::precondition(
                "analysis",
                "sweep couplings must be finite and >= 0",
            ));
        }
        if self.ranks.contains(&0) {
            return Err(Error::precondition("analysis", "rank ≥ 1"));
        }
        if self.n_traj.contains(&0) {
            return Err(Error::precondition("analysis", "n_traj >= 1"));
        }
        if !(self.t_final > 0.0) || !(self.sample_interval > 0.0) {
            return Err(Error::precondition("analysis", "t_final > 0 and sample_interval > 0"));
        }
        steps_per_sample(self.sample_interval, self.exact_dt, "exact")?;
        steps_per_sample(self.sample_interval, self.ert_dt, "ert")?;
        steps_per_sample(self.sample_interval, self.wmc_dt, "wmc")?;
        Ok(())
    }

    fn scored(&self, s: &TimeSeries) -> Result<TimeSeries> {
        if self.channels.is_empty() {
            return Ok(s.clone());
        }
        let names: Vec<&str> = self.channels.iter().map(String::as_str).collect();
        s.select(&names)
            .ok_or_else(|| Error::precondition("analysis", format!("sweep channels {names:?} not all present")))
    }
}

/// Runs the exact solver once per coupling, then ERT for every rank and WMC
/// for every trajectory count. Cells (couplings) run in parallel; `on_row`
/// sees each row as soon as its point completes. The returned rows are
/// ordered by coupling, then solver (`exact`, `ert`, `wmc`), then control.
pub fn benchmark_sweep(
    spec: &SweepSpec,
    cap: MemoryCap,
    build: impl Fn(f64) -> Result<ModelSpec> + Sync,
    on_row: impl FnMut(&SweepRow) + Send,
) -> Result<SweepResult> {
    spec.validate()?;
    let sink = Mutex::new(on_row);
    let emit = |row: SweepRow| {
        if let Ok(mut f) = sink.lock() {
            f(&row);
        }
        row
    };
    let cells: Vec<Result<Vec<SweepRow>>> = spec
        .couplings
        .par_iter()
        .map(|&coupling| {
            let model = build(coupling)?;
            let every = steps_per_sample(spec.sample_interval, spec.exact_dt, "exact")?;
            let exact = exact_evolve(&model, spec.exact_dt, spec.t_final, every, cap)?;
            let reference = spec.scored(&exact)?;
            let mut rows = vec![emit(SweepRow {
                solver: "exact".into(),
                control: 0,
                coupling,
                integrated_error: 0.0,
                wall_seconds: exact.meta.timings.total,
            })];
            let every = steps_per_sample(spec.sample_interval, spec.ert_dt, "ert")?;
            for &rank in &spec.ranks {
                let cfg = ErtConfig {
                    memory_cap: cap,
                    ..ErtConfig::new(rank, spec.ert_dt)
                };
                let s = evolve(&model, &cfg, spec.t_final, every)?;
                rows.push(emit(SweepRow {
                    solver: "ert".into(),
                    control: rank,
                    coupling,
                    integrated_error: integrated_error(&reference, &spec.scored(&s)?)?,
                    wall_seconds: s.meta.timings.total,
                }));
            }
            let every = steps_per_sample(spec.sample_interval, spec.wmc_dt, "wmc")?;
            for &n_traj in &spec.n_traj {
                let cfg = WmcConfig {
                    memory_cap: cap,
                    ..WmcConfig::new(n_traj, spec.seed, spec.wmc_dt)
                };
                let s = wmc_evolve(&model, &cfg, spec.t_final, every)?;
                rows.push(emit(SweepRow {
                    solver: "wmc".into(),
                    control: n_traj,
                    coupling,
                    integrated_error: integrated_error(&reference, &spec.scored(&s)?)?,
                    wall_seconds: s.meta.timings.total,
                }));
            }
            log::info!("sweep cell coupling = {coupling} done");
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::new();
    for cell in cells {
        rows.extend(cell?);
    }
    Ok(SweepResult { rows })
}
