// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors produced by the solvers, model builders and the run driver.
///
/// Messages are prefixed with the module that raised them so that a
/// failure surfaced by the CLI can be traced without a backtrace.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{module}: dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch {
        module: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{module}: matrix is not square ({rows}x{cols})")]
    NotSquare {
        module: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("{module}: non-finite entry in input")]
    NonFinite { module: &'static str },

    #[error("{module}: matrix is not Hermitian (deviation {deviation:.3e}, tolerance {tolerance:.1e})")]
    NotHermitian {
        module: &'static str,
        deviation: f64,
        tolerance: f64,
    },

    #[error("{module}: precondition violated: {what}")]
    Precondition { module: &'static str, what: String },

    #[error("{module}: resource cap exceeded: requires {required} bytes, cap is {cap} bytes")]
    ResourceCap {
        module: &'static str,
        required: u128,
        cap: u128,
    },

    #[error("{module}: numerical failure: {what}")]
    Numerical { module: &'static str, what: String },

    #[error("config: {0}")]
    Config(String),

    #[error("io: {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn precondition(module: &'static str, what: impl Into<String>) -> Self {
        Error::Precondition {
            module,
            what: what.into(),
        }
    }

    pub(crate) fn numerical(module: &'static str, what: impl Into<String>) -> Self {
        Error::Numerical {
            module,
            what: what.into(),
        }
    }

    /// Process exit code for this error class.
    ///
    /// 2 = configuration or precondition, 3 = resource cap, 4 = numerical
    /// failure. I/O failures are reported as configuration errors since the
    /// only files touched are the config and the output directory.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceCap { .. } => 3,
            Error::Numerical { .. } | Error::NonFinite { .. } => 4,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
