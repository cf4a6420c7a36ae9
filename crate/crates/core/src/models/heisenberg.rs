// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{push_dissipator, site_operator, InitialState, ModelSpec, Observable};
use crate::error::{Error, Result};
use crate::linalg::{pauli, Operator};
use crate::{dense_bytes, MemoryCap, C64};

/// Boundary-driven Heisenberg XXX chain.
///
/// `H = -pi h sum_j sz_j - pi J sum_j (sx_j sx_{j+1} + sy_j sy_{j+1} + sz_j sz_{j+1})`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinChainParams {
    pub n_sites: usize,
    /// Field strength.
    pub h: f64,
    /// Exchange coupling.
    pub j: f64,
    /// On-site dephasing rate.
    pub gamma: f64,
    /// Terminal injection/absorption rate.
    pub big_gamma: f64,
    /// Bias in `[-1, 1]`.
    pub mu: f64,
}

impl SpinChainParams {
    /// `h = J = 1` chain with the given couplings.
    pub fn unit(n_sites: usize, gamma: f64, big_gamma: f64, mu: f64) -> Self {
        SpinChainParams {
            n_sites,
            h: 1.0,
            j: 1.0,
            gamma,
            big_gamma,
            mu,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(Error::precondition("models", "spin chain n_sites >= 2"));
        }
        if !(self.gamma >= 0.0) || !(self.big_gamma >= 0.0) {
            return Err(Error::precondition("models", "spin chain rates >= 0"));
        }
        if !(-1.0..=1.0).contains(&self.mu) {
            return Err(Error::precondition("models", "spin chain bias mu in [-1, 1]"));
        }
        if !self.h.is_finite() || !self.j.is_finite() {
            return Err(Error::precondition("models", "spin chain h, J finite"));
        }
        Ok(())
    }
}

pub fn build_heisenberg(p: &SpinChainParams, cap: MemoryCap) -> Result<ModelSpec> {
    p.validate()?;
    let n = p.n_sites;
    if n > 14 {
        return Err(Error::precondition(
            "models",
            format!("spin chain of {n} sites exceeds dense limit"),
        ));
    }
    let dim = 1usize << n;
    // H, N observables, up to N + 4 dissipators
    cap.check("models", dense_bytes(dim, 2 * n + 6))?;

    let site = |op: &Operator, j: usize| site_operator(op, j, n, 2);
    let sz: Vec<Operator> = (1..=n).map(|j| site(&pauli::z(), j)).collect::<Result<_>>()?;
    let sx: Vec<Operator> = (1..=n).map(|j| site(&pauli::x(), j)).collect::<Result<_>>()?;
    let sy: Vec<Operator> = (1..=n).map(|j| site(&pauli::y(), j)).collect::<Result<_>>()?;

    let pi = std::f64::consts::PI;
    let mut h = Operator::zeros(dim);
    for z in &sz {
        h = &h - &z.scale_real(pi * p.h);
    }
    for j in 0..n - 1 {
        let bond = &(&(&sx[j] * &sx[j + 1]) + &(&sy[j] * &sy[j + 1])) + &(&sz[j] * &sz[j + 1]);
        h = &h - &bond.scale_real(pi * p.j);
    }

    let mut dissipators = Vec::new();
    for (j, z) in sz.iter().enumerate() {
        push_dissipator(&mut dissipators, format!("dephasing_{}", j + 1), p.gamma, z)?;
    }
    let plus_1 = site(&pauli::raising(), 1)?;
    let minus_1 = site(&pauli::lowering(), 1)?;
    let plus_n = site(&pauli::raising(), n)?;
    let minus_n = site(&pauli::lowering(), n)?;
    push_dissipator(&mut dissipators, "inject_1".into(), p.big_gamma * (1.0 - p.mu), &plus_1)?;
    push_dissipator(
        &mut dissipators,
        "absorb_1".into(),
        p.big_gamma * (1.0 + p.mu),
        &minus_1,
    )?;
    push_dissipator(
        &mut dissipators,
        format!("inject_{n}"),
        p.big_gamma * (1.0 + p.mu),
        &plus_n,
    )?;
    push_dissipator(
        &mut dissipators,
        format!("absorb_{n}"),
        p.big_gamma * (1.0 - p.mu),
        &minus_n,
    )?;

    let observables = sz
        .into_iter()
        .enumerate()
        .map(|(j, op)| Observable {
            name: format!("sz_{}", j + 1),
            op,
        })
        .collect();

    // all spins along +x
    let amp = C64::new((dim as f64).sqrt().recip(), 0.0);
    let initial = InitialState::Pure(vec![amp; dim]);

    ModelSpec::new("heisenberg", h, dissipators, observables, initial, p)
}
