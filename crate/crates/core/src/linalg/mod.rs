// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex kernels shared by every solver.

mod eigh;
mod expm;
mod operator;
mod sparse;

pub(crate) use eigh::eigh_descending_unchecked;
pub use eigh::{eigh_descending, spectral_norm, HermitianEigen};
pub use expm::expm;
pub use operator::{pauli, Operator};
pub use sparse::SparseOperator;

use crate::error::{Error, Result};

/// Tolerance for structural checks (Hermiticity, unitarity, reconstruction).
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// Largest Hilbert dimension a dense operator may have (4 GiB per matrix).
pub const MAX_HILBERT_DIM: usize = 1 << 14;

/// Kronecker product; entry `(i*b+k, j*b+l)` is `a[i,j] * b[k,l]`.
pub fn kron(a: &Operator, b: &Operator) -> Result<Operator> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da.checked_mul(db).filter(|&d| d <= MAX_HILBERT_DIM).ok_or_else(|| {
        Error::precondition(
            "linalg",
            format!("kron dimension {da}x{db} exceeds maximum Hilbert dimension {MAX_HILBERT_DIM}"),
        )
    })?;
    Ok(Operator::from_fn(dim, |r, c| {
        a.get(r / db, c / db) * b.get(r % db, c % db)
    }))
}

/// Kronecker product of a list, left to right.
pub fn kron_all<'a>(ops: impl IntoIterator<Item = &'a Operator>) -> Result<Operator> {
    let mut iter = ops.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::precondition("linalg", "kron of empty list"))?
        .clone();
    iter.try_fold(first, |acc, op| kron(&acc, op))
}
