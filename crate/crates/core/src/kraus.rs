// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! Approximate infinitesimal Kraus operators for a Lindblad generator.
//!
//! For `K` dissipators `A_k` and Hamiltonian `H` (hbar = 1) every dissipator
//! contributes the pair
//!
//! ```text
//! U_k = exp(dt J_k - i sqrt(K dt) A_k)
//! V_k = exp(dt J_k + i sqrt(K dt) A_k)
//! J_k = -i H + (K/2) (A_k^2 - A_k† A_k)
//! ```
//!
//! and `rho -> (1/2K) sum_k (U_k rho U_k† + V_k rho V_k†)` reproduces one
//! Lindblad step up to `O(dt^2)`. The pairs are complete only to
//! `O(dt^2)`; [`completeness_residual`] measures the defect.

use crate::error::{Error, Result};
use crate::linalg::{eigh_descending_unchecked, expm, spectral_norm, Operator};
use crate::C64;

/// Kraus pair for a single dissipator at a fixed time step.
#[derive(Clone, Debug)]
pub struct KrausPair {
    pub u: Operator,
    pub v: Operator,
    /// Zero-based position of the dissipator in the model's list.
    pub dissipator_index: usize,
}

/// All pairs of a run. Immutable after construction and shared read-only by
/// every step.
#[derive(Clone, Debug)]
pub struct KrausSet {
    pairs: Vec<KrausPair>,
    dt: f64,
}

impl KrausSet {
    pub fn pairs(&self) -> &[KrausPair] {
        &self.pairs
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of dissipators `K`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.pairs[0].u.dim()
    }

    /// Dense application of the map to a density matrix.
    pub fn apply_to_density(&self, rho: &Operator) -> Operator {
        let weight = 1.0 / (2.0 * self.len() as f64);
        let mut out = Operator::zeros(rho.dim());
        for p in &self.pairs {
            let uu = &(&p.u * rho) * &p.u.adjoint();
            let vv = &(&p.v * rho) * &p.v.adjoint();
            out = &out + &(&uu + &vv);
        }
        out.scale_real(weight)
    }
}

fn check_same_dim(h: &Operator, a: &Operator) -> Result<()> {
    if h.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            module: "kraus",
            expected: h.dim(),
            found: a.dim(),
        });
    }
    Ok(())
}

/// `J_k = -i H + (K/2)(A_k^2 - A_k† A_k)`.
pub fn build_generator(h: &Operator, a_k: &Operator, big_k: usize) -> Result<Operator> {
    check_same_dim(h, a_k)?;
    if big_k == 0 {
        return Err(Error::precondition("kraus", "number of dissipators K >= 1"));
    }
    let half_k = 0.5 * big_k as f64;
    let a2 = a_k * a_k;
    let ada = &a_k.adjoint() * a_k;
    let coherent = h.scale(C64::new(0.0, -1.0));
    Ok(&coherent + &(&a2 - &ada).scale_real(half_k))
}

/// Builds the `K` pairs for step `dt`. The exponentials are computed once
/// here; a run reuses them for every step.
///
/// A closed system is expressed with a single zero dissipator, which makes
/// `U = V = exp(-i H dt)`.
pub fn build_kraus_set(h: &Operator, dissipators: &[Operator], dt: f64) -> Result<KrausSet> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::precondition("kraus", format!("dt > 0 (got {dt})")));
    }
    if dissipators.is_empty() {
        return Err(Error::precondition(
            "kraus",
            "at least one dissipator (use a zero dissipator for closed systems)",
        ));
    }
    let big_k = dissipators.len();
    let root = (big_k as f64 * dt).sqrt();
    let mut pairs = Vec::with_capacity(big_k);
    for (idx, a) in dissipators.iter().enumerate() {
        let j = build_generator(h, a, big_k)?;
        let drift = j.scale_real(dt);
        let kick = a.scale(C64::new(0.0, root));
        let u = expm(&(&drift - &kick))?;
        let v = expm(&(&drift + &kick))?;
        pairs.push(KrausPair {
            u,
            v,
            dissipator_index: idx,
        });
    }
    Ok(KrausSet { pairs, dt })
}

/// Spectral norm of `(1/2K) sum_k (U_k† U_k + V_k† V_k) - I`.
pub fn completeness_residual(ks: &KrausSet) -> f64 {
    let n = ks.dim();
    let mut sum = Operator::zeros(n);
    for p in ks.pairs() {
        sum = &sum + &(&p.u.adjoint() * &p.u);
        sum = &sum + &(&p.v.adjoint() * &p.v);
    }
    let defect = &sum.scale_real(1.0 / (2.0 * ks.len() as f64)) - &Operator::identity(n);
    match eigh_descending_unchecked(defect.as_mat()) {
        Ok(e) => e.values.iter().fold(0.0f64, |m, w| m.max(w.abs())),
        Err(_) => defect.norm_fro(),
    }
}

/// Default step `1e-3 / max(|H|, K max_k |A_k† A_k|)` in spectral norm.
/// Targets a relative method error of order 1e-3.
pub fn default_dt(h: &Operator, dissipators: &[Operator]) -> f64 {
    let k = dissipators.len().max(1) as f64;
    let h_norm = spectral_norm(h);
    let a_norm = dissipators.iter().map(|a| spectral_norm(a).powi(2)).fold(0.0, f64::max);
    let scale = h_norm.max(k * a_norm);
    if scale > 0.0 {
        1e-3 / scale
    } else {
        1e-3
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn generator_examples() {
        let zero = Operator::zeros(2);
        let z = pauli::z();
        assert!(build_generator(&zero, &z, 1).unwrap().max_abs() < 1e-15);
        let j = build_generator(&z, &zero, 1).unwrap();
        assert!(j.max_abs_diff(&z.scale(c(0.0, -1.0))) < 1e-15);
        // sigma_-^2 = 0, sigma_+ sigma_- = |e><e|  (excited state first)
        let j = build_generator(&zero, &pauli::lowering(), 1).unwrap();
        let expected = Operator::diagonal(&[c(-0.5, 0.0), c(0.0, 0.0)]);
        assert!(j.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn generator_dimension_mismatch() {
        assert!(matches!(
            build_generator(&Operator::zeros(2), &Operator::zeros(3), 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zero_generator_gives_identity_pairs() {
        let ks = build_kraus_set(&Operator::zeros(2), &[Operator::zeros(2)], 0.37).unwrap();
        assert!(ks.pairs()[0].u.max_abs_diff(&Operator::identity(2)) < 1e-15);
        assert!(ks.pairs()[0].v.max_abs_diff(&Operator::identity(2)) < 1e-15);
        assert!(completeness_residual(&ks) < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let h = Operator::zeros(2);
        assert!(build_kraus_set(&h, &[Operator::zeros(2)], 0.0).is_err());
        assert!(build_kraus_set(&h, &[Operator::zeros(2)], -1.0).is_err());
        assert!(build_kraus_set(&h, &[], 0.1).is_err());
    }

    #[test]
    fn hermitian_dissipator_pairs_are_unitary() {
        let a = pauli::z().scale_real(0.3f64.sqrt());
        let dt = 1e-3;
        let ks = build_kraus_set(&pauli::x(), &[a], dt).unwrap();
        for p in ks.pairs() {
            let uu = &p.u.adjoint() * &p.u;
            assert!(uu.max_abs_diff(&Operator::identity(2)) <= 10.0 * dt * dt);
        }
        assert!(completeness_residual(&ks) <= 10.0 * dt * dt);
    }

    #[test]
    fn default_dt_scales_with_norms() {
        let h = pauli::z().scale_real(10.0);
        let dt = default_dt(&h, &[pauli::lowering()]);
        assert!((dt - 1e-4).abs() < 1e-12);
    }
}
