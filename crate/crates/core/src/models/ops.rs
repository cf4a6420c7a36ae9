// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, Operator, MAX_HILBERT_DIM};
use crate::C64;

/// `I^{(site-1)} ⊗ op ⊗ I^{(n_sites-site)}`, sites counted from 1.
pub fn site_operator(op: &Operator, site: usize, n_sites: usize, local_dim: usize) -> Result<Operator> {
    if site == 0 || site > n_sites {
        return Err(Error::precondition(
            "models",
            format!("site {site} out of range 1..={n_sites}"),
        ));
    }
    if op.dim() != local_dim {
        return Err(Error::DimensionMismatch {
            module: "models",
            expected: local_dim,
            found: op.dim(),
        });
    }
    let total = (local_dim as u128).checked_pow(n_sites as u32);
    if total.map_or(true, |t| t > MAX_HILBERT_DIM as u128) {
        return Err(Error::precondition(
            "models",
            format!("Hilbert dimension {local_dim}^{n_sites} exceeds {MAX_HILBERT_DIM}"),
        ));
    }
    let left = Operator::identity(local_dim.pow(site as u32 - 1));
    let right = Operator::identity(local_dim.pow((n_sites - site) as u32));
    kron(&kron(&left, op)?, &right)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

/// Annihilation operator for mode `m` (zero based) among `n_modes`
/// fermionic modes: `(prod_{l<m} sigma_z^(l)) sigma_-^(m)`.
pub fn annihilation(mode: usize, n_modes: usize) -> Result<Operator> {
    if mode >= n_modes {
        return Err(Error::precondition(
            "models",
            format!("mode {mode} out of range 0..{n_modes}"),
        ));
    }
    let mut factors: Vec<Operator> = Vec::with_capacity(n_modes);
    for l in 0..n_modes {
        factors.push(if l < mode {
            pauli::z()
        } else if l == mode {
            pauli::lowering()
        } else {
            Operator::identity(2)
        });
    }
    crate::linalg::kron_all(&factors)
}

/// Jordan–Wigner annihilation operator `c_{site, spin}` on an `n_sites`
/// chain. Modes are ordered `(1↑, 1↓, 2↑, 2↓, ...)`.
pub fn jordan_wigner(site: usize, spin: Spin, n_sites: usize) -> Result<Operator> {
    if site == 0 || site > n_sites {
        return Err(Error::precondition(
            "models",
            format!("site {site} out of range 1..={n_sites}"),
        ));
    }
    let mode = 2 * (site - 1) + if spin == Spin::Up { 0 } else { 1 };
    annihilation(mode, 2 * n_sites)
}

/// `c† c`.
pub fn number_operator(c: &Operator) -> Operator {
    &c.adjoint() * c
}

/// Truncated bosonic annihilation operator on `levels` Fock states.
pub fn boson_annihilation(levels: usize) -> Operator {
    Operator::from_fn(levels, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}
