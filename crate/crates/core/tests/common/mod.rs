// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use ert_core::linalg::{eigh_descending, Operator};
use ert_core::models::{build_qubit, ModelSpec, QubitParams, QubitState};
use ert_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, dim: usize) -> Vec<C64> {
    (0..dim)
        .map(|_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect()
}

pub fn normalized(mut v: Vec<C64>) -> Vec<C64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
    v
}

pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    Operator::from_fn(dim, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    random_matrix(rng, dim).hermitian_part()
}

/// Rescales `a` to spectral-ish size `target` using the Frobenius norm.
pub fn with_norm(a: &Operator, target: f64) -> Operator {
    a.scale_real(target / a.norm_fro().max(1e-300))
}

pub fn projector(v: &[C64]) -> Operator {
    Operator::from_fn(v.len(), |i, j| v[i] * v[j].conj())
}

/// Right-hand side of the Lindblad equation, written out densely.
pub fn lindblad_rhs(h: &Operator, dissipators: &[Operator], rho: &Operator) -> Operator {
    let i = c(0.0, 1.0);
    let mut out = (&(h * rho) - &(rho * h)).scale(-i);
    for a in dissipators {
        let ad = a.adjoint();
        let ada = &ad * a;
        let jump = &(a * rho) * &ad;
        let anti = (&(&ada * rho) + &(rho * &ada)).scale_real(0.5);
        out = &out + &(&jump - &anti);
    }
    out
}

pub fn euler_step(h: &Operator, dissipators: &[Operator], rho: &Operator, dt: f64) -> Operator {
    rho + &lindblad_rhs(h, dissipators, rho).scale_real(dt)
}

/// Dense oracle: top-`rank` eigen-truncation of `rho`.
pub fn eigen_truncate(rho: &Operator, rank: usize) -> Operator {
    let eig = eigh_descending(rho).unwrap();
    let dim = rho.dim();
    let mut out = Operator::zeros(dim);
    for k in 0..rank.min(dim) {
        let w = eig.values[k];
        if w <= 0.0 {
            break;
        }
        let v: Vec<C64> = (0..dim).map(|i| eig.vectors[(i, k)]).collect();
        out = &out + &projector(&v).scale_real(w);
    }
    out
}

pub fn min_eigenvalue(rho: &Operator) -> f64 {
    *eigh_descending(&rho.hermitian_part()).unwrap().values.last().unwrap()
}

pub fn qubit(decay: f64, dephasing: f64, omega: f64, initial: QubitState) -> ModelSpec {
    build_qubit(&QubitParams {
        omega,
        decay,
        dephasing,
        initial,
    })
    .unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
