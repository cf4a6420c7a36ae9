// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! Compressed-row operator for applying local many-body operators to
//! dense blocks. Only exact zeros are dropped, so products agree with the
//! dense path to rounding.

use faer::Mat;

use super::Operator;
use crate::C64;

#[derive(Clone, Debug)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl SparseOperator {
    pub fn from_dense(op: &Operator) -> Self {
        let dim = op.dim();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for i in 0..dim {
            for j in 0..dim {
                let z = op.get(i, j);
                if z.re != 0.0 || z.im != 0.0 {
                    col_idx.push(j);
                    values.push(z);
                }
            }
            row_ptr.push(col_idx.len());
        }
        SparseOperator {
            dim,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn to_dense(&self) -> Operator {
        let mut m = Mat::<C64>::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.col_idx[k])] = self.values[k];
            }
        }
        Operator::from_mat_unchecked(m)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_dense(&self.to_dense().adjoint())
    }

    /// `out += alpha * A x`, column by column.
    pub fn mul_dense_acc(&self, x: &Mat<C64>, out: &mut Mat<C64>, alpha: C64) {
        debug_assert_eq!(x.nrows(), self.dim);
        debug_assert_eq!(out.nrows(), self.dim);
        debug_assert_eq!(out.ncols(), x.ncols());
        for c in 0..x.ncols() {
            let xc = x.col_as_slice(c);
            let oc = out.col_as_slice_mut(c);
            for (i, o) in oc.iter_mut().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                    acc += self.values[k] * xc[self.col_idx[k]];
                }
                *o += alpha * acc;
            }
        }
    }

    /// `A x`.
    pub fn mul_dense(&self, x: &Mat<C64>) -> Mat<C64> {
        let mut out = Mat::zeros(self.dim, x.ncols());
        self.mul_dense_acc(x, &mut out, C64::new(1.0, 0.0));
        out
    }

    /// `out += alpha * x A`.
    pub fn dense_mul_acc(&self, x: &Mat<C64>, out: &mut Mat<C64>, alpha: C64) {
        debug_assert_eq!(x.ncols(), self.dim);
        debug_assert_eq!(out.ncols(), self.dim);
        debug_assert_eq!(out.nrows(), x.nrows());
        for k in 0..self.dim {
            let xk = x.col_as_slice(k);
            for p in self.row_ptr[k]..self.row_ptr[k + 1] {
                let j = self.col_idx[p];
                let v = alpha * self.values[p];
                let oj = out.col_as_slice_mut(j);
                for (o, &xv) in oj.iter_mut().zip(xk) {
                    *o += v * xv;
                }
            }
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.dim)
            .map(|i| {
                (self.row_ptr[i]..self.row_ptr[i + 1])
                    .map(|k| self.values[k] * v[self.col_idx[k]])
                    .sum()
            })
            .collect()
    }

    /// `sum_k <psi_k|A|psi_k>` over the columns of `members`.
    pub fn ensemble_expectation(&self, members: &Mat<C64>) -> C64 {
        let mut total = C64::new(0.0, 0.0);
        for c in 0..members.ncols() {
            let psi = members.col_as_slice(c);
            for i in 0..self.dim {
                let mut acc = C64::new(0.0, 0.0);
                for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                    acc += self.values[k] * psi[self.col_idx[k]];
                }
                total += psi[i].conj() * acc;
            }
        }
        total
    }

    /// `Tr(A rho)`.
    pub fn trace_product(&self, rho: &Mat<C64>) -> C64 {
        let mut total = C64::new(0.0, 0.0);
        for i in 0..self.dim {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                total += self.values[k] * rho[(self.col_idx[k], i)];
            }
        }
        total
    }
}
