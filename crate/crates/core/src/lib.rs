// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! Ensemble rank truncation (ERT) for Markovian open quantum systems.
//!
//! A Lindblad evolution is represented by an ensemble of unnormalized pure
//! states. Each step applies a pair of exponential Kraus-like operators per
//! dissipator, then the ensemble is compressed onto its `R` principal
//! components. The crate also ships an exact density-matrix integrator and
//! a quantum-jump Monte-Carlo solver for validation, the three benchmark
//! models (Heisenberg chain, emitters in a cavity, dissipative
//! Fermi-Hubbard chain), and the error metrics and sweep harness used to
//! compare them.

// `!(x > 0.0)` rejects NaN together with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod ert;
pub mod kraus;
pub mod linalg;
pub mod models;
pub mod reference;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;

/// Upper bound on the memory a solver may allocate for its working set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MemoryCap {
    pub bytes: u128,
}

impl MemoryCap {
    /// 4 GiB.
    pub const DEFAULT_BYTES: u128 = 4 << 30;

    pub fn new(bytes: u128) -> Self {
        MemoryCap { bytes }
    }

    pub(crate) fn check(&self, module: &'static str, required: u128) -> Result<()> {
        if required > self.bytes {
            Err(Error::ResourceCap {
                module,
                required,
                cap: self.bytes,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for MemoryCap {
    fn default() -> Self {
        MemoryCap::new(Self::DEFAULT_BYTES)
    }
}

/// Bytes held by `count` dense complex matrices of dimension `dim`.
pub(crate) fn dense_bytes(dim: usize, count: usize) -> u128 {
    (dim as u128) * (dim as u128) * (count as u128) * 16
}
