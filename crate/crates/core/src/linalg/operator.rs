// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, Mul, Neg, Sub};

use faer::{Mat, MatRef};

use crate::error::{Error, Result};
use crate::C64;

/// Dense square complex matrix acting on an `dim`-dimensional Hilbert space.
///
/// Entries are always finite; every constructor that accepts external data
/// checks this.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: Mat<C64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Operator {
            mat: Mat::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Operator {
            mat: Mat::identity(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Operator {
            mat: Mat::from_fn(dim, dim, f),
        }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let dim = entries.len();
        Self::from_fn(dim, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) })
    }

    /// Build from row slices. Fails if the rows do not form a square matrix
    /// or contain non-finite values.
    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let dim = rows.len();
        for r in rows {
            if r.len() != dim {
                return Err(Error::NotSquare {
                    module: "linalg",
                    rows: dim,
                    cols: r.len(),
                });
            }
        }
        Self::try_from_mat(Mat::from_fn(dim, dim, |i, j| rows[i][j]))
    }

    /// Real-valued convenience constructor, mostly for Pauli-style literals.
    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn try_from_mat(mat: Mat<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                module: "linalg",
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let op = Operator { mat };
        if !op.is_finite() {
            return Err(Error::NonFinite { module: "linalg" });
        }
        Ok(op)
    }

    /// Wrap a matrix produced by our own kernels; squareness is asserted,
    /// finiteness is left to the caller.
    pub(crate) fn from_mat_unchecked(mat: Mat<C64>) -> Self {
        debug_assert_eq!(mat.nrows(), mat.ncols());
        Operator { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn as_mat(&self) -> MatRef<'_, C64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.mat
    }

    pub fn is_finite(&self) -> bool {
        self.mat
            .col_iter()
            .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    pub fn adjoint(&self) -> Self {
        Operator {
            mat: self.mat.adjoint().to_owned(),
        }
    }

    pub fn transpose(&self) -> Self {
        Operator {
            mat: self.mat.transpose().to_owned(),
        }
    }

    pub fn conj(&self) -> Self {
        Operator {
            mat: self.mat.conjugate().to_owned(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Operator {
            mat: Mat::from_fn(self.dim(), self.dim(), |i, j| self.mat[(i, j)] * factor),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.norm_max()
    }

    pub fn norm_fro(&self) -> f64 {
        self.mat.norm_l2()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        self.mat
            .col_iter()
            .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `max |a_ij - conj(a_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                dev = dev.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Hermitian up to `tol` relative to `max(1, max_abs)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol * self.max_abs().max(1.0)
    }

    pub(crate) fn ensure_hermitian(&self, module: &'static str, tol: f64) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation <= tol * self.max_abs().max(1.0) {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                module,
                deviation,
                tolerance: tol,
            })
        }
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim();
        Self::from_fn(n, |i, j| (self.mat[(i, j)] + self.mat[(j, i)].conj()) * 0.5)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim(), "operator/vector dimension mismatch");
        let n = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (j, &vj) in v.iter().enumerate() {
            if vj == C64::new(0.0, 0.0) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.mat[(i, j)] * vj;
            }
        }
        out
    }

    /// `<u|A|v>`.
    pub fn matrix_element(&self, u: &[C64], v: &[C64]) -> C64 {
        let av = self.apply(v);
        u.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Operator) -> Operator {
        &(self * other) + &(other * self)
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        (self - other).max_abs()
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_real(-1.0)
    }
}

impl Mul<&Operator> for C64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale(self)
    }
}

impl Mul<&Operator> for f64 {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        rhs.scale_real(self)
    }
}

/// Pauli matrices and ladder operators in the `(|up>, |down>)` basis, i.e.
/// the excited / occupied state is index 0.
pub mod pauli {
    use super::Operator;
    use crate::C64;

    pub fn x() -> Operator {
        Operator::from_real_rows([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn y() -> Operator {
        Operator::from_fn(2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => C64::new(0.0, 0.0),
        })
    }

    pub fn z() -> Operator {
        Operator::from_real_rows([[1.0, 0.0], [0.0, -1.0]])
    }

    /// `|up><down|`
    pub fn raising() -> Operator {
        Operator::from_real_rows([[0.0, 1.0], [0.0, 0.0]])
    }

    /// `|down><up|`
    pub fn lowering() -> Operator {
        Operator::from_real_rows([[0.0, 0.0], [1.0, 0.0]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_rows_rejects_ragged_and_non_finite() {
        let one = C64::new(1.0, 0.0);
        assert!(Operator::from_rows(&[&[one, one], &[one]]).is_err());
        let nan = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            Operator::from_rows(&[&[one, nan], &[one, one]]),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (pauli::x(), pauli::y(), pauli::z());
        let i = C64::new(0.0, 1.0);
        assert!((&x * &y).max_abs_diff(&(i * &z)) < 1e-15);
        assert!((&x * &x).max_abs_diff(&Operator::identity(2)) < 1e-15);
        let sp_sm = &pauli::raising() * &pauli::lowering();
        assert!(sp_sm.max_abs_diff(&Operator::diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)])) < 1e-15);
    }

    #[test]
    fn hermiticity_check() {
        assert!(pauli::y().is_hermitian(1e-12));
        assert!(!pauli::raising().is_hermitian(1e-12));
        assert!(pauli::raising().ensure_hermitian("test", 1e-10).is_err());
    }
}
