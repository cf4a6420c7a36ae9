// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{push_dissipator, InitialState, ModelSpec, Observable};
use crate::error::{Error, Result};
use crate::linalg::{pauli, Operator};
use crate::C64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QubitState {
    #[default]
    Excited,
    Ground,
    /// `(|e> + |g>)/sqrt(2)`.
    Plus,
}

/// Single two-level system with `H = (omega/2) sz`, decay `sqrt(decay) s-`
/// and dephasing `sqrt(dephasing) sz`. Analytic reference for the solvers.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitParams {
    #[serde(default)]
    pub omega: f64,
    #[serde(default)]
    pub decay: f64,
    #[serde(default)]
    pub dephasing: f64,
    #[serde(default)]
    pub initial: QubitState,
}

pub fn build_qubit(p: &QubitParams) -> Result<ModelSpec> {
    if !p.omega.is_finite() {
        return Err(Error::precondition("models", "qubit omega finite"));
    }
    let h = pauli::z().scale_real(0.5 * p.omega);
    let mut dissipators = Vec::new();
    push_dissipator(&mut dissipators, "decay".into(), p.decay, &pauli::lowering())?;
    push_dissipator(&mut dissipators, "dephasing".into(), p.dephasing, &pauli::z())?;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let psi = match p.initial {
        QubitState::Excited => vec![one, zero],
        QubitState::Ground => vec![zero, one],
        QubitState::Plus => vec![one * std::f64::consts::FRAC_1_SQRT_2; 2],
    };
    let observables = vec![
        Observable {
            name: "p_excited".into(),
            op: Operator::diagonal(&[one, zero]),
        },
        Observable {
            name: "sx".into(),
            op: pauli::x(),
        },
        Observable {
            name: "sy".into(),
            op: pauli::y(),
        },
        Observable {
            name: "sz".into(),
            op: pauli::z(),
        },
    ];
    ModelSpec::new("qubit", h, dissipators, observables, InitialState::Pure(psi), p)
}
