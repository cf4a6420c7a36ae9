// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use faer::{Mat, MatRef, Side};

use super::{Operator, STRUCTURAL_TOL};
use crate::error::{Error, Result};
use crate::C64;

/// Eigendecomposition of a Hermitian matrix with eigenvalues in
/// non-increasing order. Column `k` of `vectors` belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Mat<C64>,
}

impl HermitianEigen {
    /// `U diag(w) U†`.
    pub fn reconstruct(&self) -> Operator {
        let n = self.values.len();
        let scaled = Mat::from_fn(n, n, |i, j| self.vectors[(i, j)] * self.values[j]);
        Operator::from_mat_unchecked(&scaled * self.vectors.adjoint())
    }
}

/// Hermitian eigendecomposition, eigenvalues sorted descending.
///
/// The input is symmetrized as `(S + S†)/2` before decomposition; inputs
/// further than [`STRUCTURAL_TOL`] (relative) from Hermitian are rejected.
pub fn eigh_descending(s: &Operator) -> Result<HermitianEigen> {
    s.ensure_hermitian("linalg", STRUCTURAL_TOL)?;
    if !s.is_finite() {
        return Err(Error::NonFinite { module: "linalg" });
    }
    eigh_descending_unchecked(s.as_mat())
}

/// Same as [`eigh_descending`] without the Hermiticity check. The lower
/// triangle is symmetrized against the upper one first.
pub(crate) fn eigh_descending_unchecked(s: MatRef<'_, C64>) -> Result<HermitianEigen> {
    let n = s.nrows();
    let sym = Mat::from_fn(n, n, |i, j| (s[(i, j)] + s[(j, i)].conj()) * 0.5);
    let evd = sym
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::numerical("linalg", format!("eigendecomposition failed: {e:?}")))?;
    let ascending = evd.S().column_vector();
    let u = evd.U();
    // faer returns ascending order; reverse columns.
    let values: Vec<f64> = (0..n).rev().map(|k| ascending[k].re).collect();
    let vectors = Mat::from_fn(n, n, |i, j| u[(i, n - 1 - j)]);
    Ok(HermitianEigen { values, vectors })
}

/// Largest singular value, `sqrt(max eig(A†A))`.
pub fn spectral_norm(a: &Operator) -> f64 {
    if a.dim() == 0 {
        return 0.0;
    }
    let gram = a.as_mat().adjoint() * a.as_mat();
    match eigh_descending_unchecked(gram.as_ref()) {
        Ok(e) => e.values[0].max(0.0).sqrt(),
        Err(_) => a.norm_fro(),
    }
}
