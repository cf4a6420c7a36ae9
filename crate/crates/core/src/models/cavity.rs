// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::ops::boson_annihilation;
use super::{product_state, push_dissipator, site_operator, InitialState, ModelSpec, Observable};
use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, Operator, MAX_HILBERT_DIM};
use crate::{dense_bytes, MemoryCap, C64};

/// Two-level emitters coupled to a driven, lossy cavity mode.
///
/// The cavity is the leftmost tensor factor, followed by atoms `1..=n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavityParams {
    pub n_atoms: usize,
    /// Fock-space cutoff (number of photon levels kept).
    pub n_photon_levels: usize,
    pub g: f64,
    pub kappa: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Real symmetric `Lambda_ij = Delta_i delta_ij + sqrt(lambda_i lambda_j)`.
    pub lambda_matrix: Vec<Vec<f64>>,
}

impl CavityParams {
    pub const DEFAULT_PHOTON_LEVELS: usize = 6;

    /// Diagonal `Lambda_ij = 20 j g delta_ij` (atoms counted from 1).
    pub fn detuning_ladder(n_atoms: usize, n_photon_levels: usize, g: f64, kappa: f64, beta: f64, gamma: f64) -> Self {
        let lambda_matrix = (0..n_atoms)
            .map(|i| {
                (0..n_atoms)
                    .map(|j| if i == j { 20.0 * (j + 1) as f64 * g } else { 0.0 })
                    .collect()
            })
            .collect();
        CavityParams {
            n_atoms,
            n_photon_levels,
            g,
            kappa,
            beta,
            gamma,
            lambda_matrix,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_atoms == 0 {
            return Err(Error::precondition("models", "cavity n_atoms >= 1"));
        }
        if self.n_photon_levels < 2 {
            return Err(Error::precondition("models", "cavity n_photon_levels >= 2"));
        }
        if !(self.kappa >= 0.0) || !(self.gamma >= 0.0) {
            return Err(Error::precondition("models", "cavity rates >= 0"));
        }
        if !self.g.is_finite() || !self.beta.is_finite() {
            return Err(Error::precondition("models", "cavity g, beta finite"));
        }
        let n = self.n_atoms;
        if self.lambda_matrix.len() != n || self.lambda_matrix.iter().any(|r| r.len() != n) {
            return Err(Error::precondition("models", format!("lambda_matrix must be {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (self.lambda_matrix[i][j], self.lambda_matrix[j][i]);
                if !a.is_finite() || (a - b).abs() > 1e-12 * a.abs().max(1.0) {
                    return Err(Error::precondition("models", "lambda_matrix symmetric and finite"));
                }
            }
        }
        Ok(())
    }
}

pub fn build_cavity(p: &CavityParams, cap: MemoryCap) -> Result<ModelSpec> {
    p.validate()?;
    let n = p.n_atoms;
    let levels = p.n_photon_levels;
    let dim = (levels as u128) << n.min(127);
    if n > 20 || dim > MAX_HILBERT_DIM as u128 {
        return Err(Error::precondition(
            "models",
            format!("cavity Hilbert dimension {levels}*2^{n} exceeds {MAX_HILBERT_DIM}"),
        ));
    }
    let dim = dim as usize;
    cap.check("models", dense_bytes(dim, 3 * n + 8))?;

    let atom_dim = 1usize << n;
    let id_cav = Operator::identity(levels);
    let id_atoms = Operator::identity(atom_dim);
    let atom = |op: &Operator, j: usize| -> Result<Operator> { kron(&id_cav, &site_operator(op, j, n, 2)?) };
    let a = kron(&boson_annihilation(levels), &id_atoms)?;
    let ad = a.adjoint();
    let sp: Vec<Operator> = (1..=n).map(|j| atom(&pauli::raising(), j)).collect::<Result<_>>()?;
    let sm: Vec<Operator> = (1..=n).map(|j| atom(&pauli::lowering(), j)).collect::<Result<_>>()?;

    let mut h = Operator::zeros(dim);
    for (row, sp_i) in p.lambda_matrix.iter().zip(&sp) {
        for (&lij, sm_j) in row.iter().zip(&sm) {
            if lij != 0.0 {
                h = &h + &(sp_i * sm_j).scale_real(lij);
            }
        }
    }
    for j in 0..n {
        let exchange = &(&ad * &sm[j]) + &(&a * &sp[j]);
        h = &h + &exchange.scale_real(p.g);
    }
    let drive = p.kappa.sqrt() * p.beta;
    if drive != 0.0 {
        h = &h + &(&a + &ad).scale_real(drive);
    }

    let collective_lowering = sm.iter().fold(Operator::zeros(dim), |acc, s| &acc + s);
    let mut dissipators = Vec::new();
    push_dissipator(&mut dissipators, "cavity_loss".into(), p.kappa, &a)?;
    push_dissipator(
        &mut dissipators,
        "collective_decay".into(),
        p.gamma,
        &collective_lowering,
    )?;

    let sz_total = (1..=n).try_fold(Operator::zeros(dim), |acc, j| {
        Ok::<_, Error>(&acc + &atom(&pauli::z(), j)?)
    })?;
    let observables = vec![
        Observable {
            name: "sz_total".into(),
            op: sz_total,
        },
        Observable {
            name: "n_cav".into(),
            op: &ad * &a,
        },
    ];

    // empty cavity, each atom in (|e> + |g>)/sqrt 2
    let mut vacuum = vec![C64::new(0.0, 0.0); levels];
    vacuum[0] = C64::new(1.0, 0.0);
    let half = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut factors = vec![vacuum];
    factors.extend(std::iter::repeat(vec![half, half]).take(n));
    let initial = InitialState::Pure(product_state(&factors));

    ModelSpec::new("cavity", h, dissipators, observables, initial, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_matches_twenty_j_g() {
        let p = CavityParams::detuning_ladder(3, 6, 0.5, 0.1, 0.1, 1e-3);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 20.0 * (j + 1) as f64 * 0.5 } else { 0.0 };
                assert_eq!(p.lambda_matrix[i][j], want);
            }
        }
    }

    #[test]
    fn dimensions_and_hermiticity() {
        let p = CavityParams::detuning_ladder(2, 4, 1.0, 0.1, 0.1, 1e-3);
        let m = build_cavity(&p, MemoryCap::default()).unwrap();
        assert_eq!(m.dim(), 16);
        assert!(m.hamiltonian.is_hermitian(1e-12));
        assert_eq!(m.dissipators.len(), 2);
        let InitialState::Pure(psi) = &m.initial_state else {
            panic!()
        };
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-14);
        // <sz_total> = 0, <n> = 0 initially
        for o in &m.observables {
            assert!(o.op.matrix_element(psi, psi).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_lambda() {
        let mut p = CavityParams::detuning_ladder(2, 4, 1.0, 0.1, 0.1, 1e-3);
        p.lambda_matrix[0][1] = 1.0;
        assert!(build_cavity(&p, MemoryCap::default()).is_err());
        let mut p = CavityParams::detuning_ladder(2, 1, 1.0, 0.1, 0.1, 1e-3);
        p.n_photon_levels = 1;
        assert!(build_cavity(&p, MemoryCap::default()).is_err());
    }
}
