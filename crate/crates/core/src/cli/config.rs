// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::analysis::SweepSpec;
use crate::error::{Error, Result};
use crate::ert::ErtConfig;
use crate::models::{
    build_cavity, build_fermi_hubbard, build_heisenberg, build_qubit, CavityParams, HubbardParams, ModelSpec,
    QubitParams, SpinChainParams,
};
use crate::reference::WmcConfig;
use crate::MemoryCap;

pub const SCHEMA_VERSION: u32 = 1;

/// Cavity parameters as written in a config file. Without `lambda_matrix`
/// the diagonal ladder `Lambda_jj = 20 j g` is used.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityConfig {
    pub n_atoms: usize,
    #[serde(default = "default_photon_levels")]
    pub n_photon_levels: usize,
    pub g: f64,
    pub kappa: f64,
    pub beta: f64,
    pub gamma: f64,
    #[serde(default)]
    pub lambda_matrix: Option<Vec<Vec<f64>>>,
}

fn default_photon_levels() -> usize {
    CavityParams::DEFAULT_PHOTON_LEVELS
}

impl CavityConfig {
    pub fn params(&self) -> CavityParams {
        let mut p = CavityParams::detuning_ladder(
            self.n_atoms,
            self.n_photon_levels,
            self.g,
            self.kappa,
            self.beta,
            self.gamma,
        );
        if let Some(m) = &self.lambda_matrix {
            p.lambda_matrix = m.clone();
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelConfig {
    Heisenberg(SpinChainParams),
    Cavity(CavityConfig),
    FermiHubbard(HubbardParams),
    Qubit(QubitParams),
}

impl ModelConfig {
    pub fn build(&self, cap: MemoryCap) -> Result<ModelSpec> {
        match self {
            ModelConfig::Heisenberg(p) => build_heisenberg(p, cap),
            ModelConfig::Cavity(c) => build_cavity(&c.params(), cap),
            ModelConfig::FermiHubbard(p) => build_fermi_hubbard(p, cap),
            ModelConfig::Qubit(p) => build_qubit(p),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelConfig::Heisenberg(p) => p.validate(),
            ModelConfig::Cavity(c) => c.params().validate(),
            ModelConfig::FermiHubbard(p) => p.validate(),
            ModelConfig::Qubit(_) => Ok(()),
        }
    }

    /// Copy with the sweep coupling applied: the terminal rate `Gamma`
    /// (in units of `h` or `t0`) for the chains, the collective decay
    /// `gamma` (in units of `g`) for the cavity, the decay rate for the
    /// qubit.
    pub fn with_coupling(&self, c: f64) -> ModelConfig {
        let mut m = self.clone();
        match &mut m {
            ModelConfig::Heisenberg(p) => p.big_gamma = c * p.h,
            ModelConfig::Cavity(p) => p.gamma = c * p.g,
            ModelConfig::FermiHubbard(p) => p.big_gamma = c * p.t0,
            ModelConfig::Qubit(p) => p.decay = c,
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SolverConfig {
    Exact {
        dt: Option<f64>,
    },
    Ert {
        rank: usize,
        dt: Option<f64>,
        #[serde(default = "default_true")]
        renormalize_trace: bool,
    },
    Wmc {
        n_traj: usize,
        dt: Option<f64>,
        #[serde(default)]
        seed: u64,
    },
}

fn default_true() -> bool {
    true
}

impl SolverConfig {
    pub fn name(&self) -> &'static str {
        match self {
            SolverConfig::Exact { .. } => "exact",
            SolverConfig::Ert { .. } => "ert",
            SolverConfig::Wmc { .. } => "wmc",
        }
    }

    fn validate(&self) -> Result<()> {
        let dt_ok = |dt: &Option<f64>| match dt {
            Some(v) if !(*v > 0.0) || !v.is_finite() => Err(Error::precondition("cli", "dt > 0")),
            _ => Ok(()),
        };
        match self {
            SolverConfig::Exact { dt } => dt_ok(dt),
            SolverConfig::Ert {
                rank,
                dt,
                renormalize_trace,
            } => {
                dt_ok(dt)?;
                ErtConfig {
                    renormalize_trace: *renormalize_trace,
                    ..ErtConfig::new(*rank, dt.unwrap_or(1.0))
                }
                .validate()
            }
            SolverConfig::Wmc { n_traj, dt, seed } => {
                dt_ok(dt)?;
                WmcConfig::new(*n_traj, *seed, dt.unwrap_or(1.0)).validate()
            }
        }
    }
}

/// A single run, or a sweep when `sweep` is present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub model: ModelConfig,
    #[serde(default)]
    pub solver: Option<SolverConfig>,
    #[serde(default)]
    pub t_final: Option<f64>,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub memory_cap_bytes: Option<u64>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
}

fn default_sample_every() -> usize {
    1
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("ert-output")
}

impl RunConfig {
    pub fn memory_cap(&self) -> MemoryCap {
        self.memory_cap_bytes
            .map_or_else(MemoryCap::default, |b| MemoryCap::new(b as u128))
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.model.validate()?;
        if let Some(s) = &self.solver {
            s.validate()?;
        }
        if let Some(t) = self.t_final {
            if !(t > 0.0) || !t.is_finite() {
                return Err(Error::precondition("cli", "t_final > 0"));
            }
        }
        if self.sample_every < 1 {
            return Err(Error::precondition("cli", "sample_every >= 1"));
        }
        if let Some(s) = &self.sweep {
            s.validate()?;
        }
        Ok(())
    }
}

/// Parses and validates a TOML run description. Unknown keys are errors.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}
