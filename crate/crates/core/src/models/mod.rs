// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! Model specifications: Hamiltonian, dissipators (with their `sqrt(rate)`
//! prefactors folded in), named observables and the initial state.
//!
//! Tensor factors are ordered with site 1 as the leftmost factor. Local
//! two-level bases put the excited / occupied state first.

mod cavity;
mod heisenberg;
mod hubbard;
mod ops;
mod qubit;

pub use cavity::{build_cavity, CavityParams};
pub use heisenberg::{build_heisenberg, SpinChainParams};
pub use hubbard::{build_fermi_hubbard, dipole_acceleration, finite_difference, HubbardParams};
pub use ops::{annihilation, boson_annihilation, jordan_wigner, number_operator, site_operator, Spin};
pub use qubit::{build_qubit, QubitParams, QubitState};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Operator, STRUCTURAL_TOL};
use crate::C64;

/// Initial condition of a run.
#[derive(Clone, Debug)]
pub enum InitialState {
    Pure(Vec<C64>),
    /// `(weight, state)` pairs; weights sum to one, states are normalized.
    Mixed(Vec<(f64, Vec<C64>)>),
}

impl InitialState {
    pub fn dim(&self) -> usize {
        match self {
            InitialState::Pure(v) => v.len(),
            InitialState::Mixed(list) => list.first().map_or(0, |(_, v)| v.len()),
        }
    }

    /// Dense density matrix.
    pub fn density(&self) -> Operator {
        let dim = self.dim();
        let terms: Vec<(f64, &Vec<C64>)> = match self {
            InitialState::Pure(v) => vec![(1.0, v)],
            InitialState::Mixed(list) => list.iter().map(|(w, v)| (*w, v)).collect(),
        };
        Operator::from_fn(dim, |i, j| terms.iter().map(|(w, v)| v[i] * v[j].conj() * *w).sum())
    }
}

#[derive(Clone, Debug)]
pub struct Observable {
    pub name: String,
    pub op: Operator,
}

#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub name: String,
    pub hamiltonian: Operator,
    pub dissipators: Vec<Operator>,
    pub dissipator_labels: Vec<String>,
    pub observables: Vec<Observable>,
    pub initial_state: InitialState,
    /// Parameter record, carried into run metadata.
    pub params: serde_json::Value,
}

impl ModelSpec {
    /// Assemble and validate a model.
    pub fn new(
        name: impl Into<String>,
        hamiltonian: Operator,
        dissipators: Vec<(String, Operator)>,
        observables: Vec<Observable>,
        initial_state: InitialState,
        params: impl Serialize,
    ) -> Result<Self> {
        let (dissipator_labels, dissipators) = dissipators.into_iter().unzip();
        let params = serde_json::to_value(params)
            .map_err(|e| Error::precondition("models", format!("unserializable parameters: {e}")))?;
        let model = ModelSpec {
            name: name.into(),
            hamiltonian,
            dissipators,
            dissipator_labels,
            observables,
            initial_state,
            params,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn observable_names(&self) -> Vec<String> {
        self.observables.iter().map(|o| o.name.clone()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        self.hamiltonian.ensure_hermitian("models", STRUCTURAL_TOL)?;
        let check_dim = |found: usize| {
            if found != dim {
                Err(Error::DimensionMismatch {
                    module: "models",
                    expected: dim,
                    found,
                })
            } else {
                Ok(())
            }
        };
        for a in &self.dissipators {
            check_dim(a.dim())?;
            if !a.is_finite() {
                return Err(Error::NonFinite { module: "models" });
            }
        }
        for o in &self.observables {
            check_dim(o.op.dim())?;
            o.op.ensure_hermitian("models", STRUCTURAL_TOL)?;
        }
        check_dim(self.initial_state.dim())?;
        Ok(())
    }

    /// Dissipator list handed to the Kraus construction; a closed model
    /// yields a single zero operator.
    pub fn dissipators_or_zero(&self) -> Vec<Operator> {
        if self.dissipators.is_empty() {
            vec![Operator::zeros(self.dim())]
        } else {
            self.dissipators.clone()
        }
    }
}

/// Tensor product of local state vectors, leftmost factor first.
pub(crate) fn product_state(factors: &[Vec<C64>]) -> Vec<C64> {
    factors.iter().fold(vec![C64::new(1.0, 0.0)], |acc, f| {
        let mut out = Vec::with_capacity(acc.len() * f.len());
        for a in &acc {
            for b in f {
                out.push(a * b);
            }
        }
        out
    })
}

/// Adds `(label, sqrt(rate) * op)` unless the rate is zero.
pub(crate) fn push_dissipator(
    list: &mut Vec<(String, Operator)>,
    label: String,
    rate: f64,
    op: &Operator,
) -> Result<()> {
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::precondition(
            "models",
            format!("dissipator rate for {label} must be finite and >= 0 (got {rate})"),
        ));
    }
    if rate > 0.0 {
        list.push((label, op.scale_real(rate.sqrt())));
    }
    Ok(())
}
