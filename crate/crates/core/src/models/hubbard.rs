// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{jordan_wigner, number_operator, push_dissipator, InitialState, ModelSpec, Observable, Spin};
use crate::analysis::{uniform_step, TimeSeries};
use crate::error::{Error, Result};
use crate::linalg::{eigh_descending, spectral_norm, Operator};
use crate::{dense_bytes, MemoryCap, C64};

/// Open Fermi-Hubbard chain driven by particle injection and absorption at
/// both terminals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HubbardParams {
    pub n_sites: usize,
    /// Hopping amplitude.
    pub t0: f64,
    /// On-site interaction.
    pub u: f64,
    /// Terminal coupling rate.
    pub big_gamma: f64,
    /// Bias in `[-1, 1]`.
    pub mu: f64,
}

impl HubbardParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 {
            return Err(Error::precondition("models", "hubbard n_sites >= 2"));
        }
        if !(self.big_gamma >= 0.0) {
            return Err(Error::precondition("models", "hubbard rates >= 0"));
        }
        if !(-1.0..=1.0).contains(&self.mu) {
            return Err(Error::precondition("models", "hubbard bias mu in [-1, 1]"));
        }
        if !self.t0.is_finite() || !self.u.is_finite() {
            return Err(Error::precondition("models", "hubbard t0, U finite"));
        }
        Ok(())
    }
}

pub fn build_fermi_hubbard(p: &HubbardParams, cap: MemoryCap) -> Result<ModelSpec> {
    p.validate()?;
    let n = p.n_sites;
    if n > 7 {
        return Err(Error::precondition(
            "models",
            format!("hubbard chain of {n} sites exceeds dense limit"),
        ));
    }
    let dim = 1usize << (2 * n);
    // 4N mode operators, H, eigenvectors, observables, 8 dissipators
    cap.check("models", dense_bytes(dim, 4 * n + 16))?;

    let spins = [Spin::Up, Spin::Down];
    let mut c = Vec::with_capacity(2 * n);
    for site in 1..=n {
        for &s in &spins {
            c.push(jordan_wigner(site, s, n)?);
        }
    }
    let mode = |site: usize, s: usize| &c[2 * (site - 1) + s];
    let cd: Vec<Operator> = c.iter().map(Operator::adjoint).collect();
    let moded = |site: usize, s: usize| &cd[2 * (site - 1) + s];

    let mut hopping = Operator::zeros(dim);
    let mut current = Operator::zeros(dim);
    for j in 1..n {
        for s in 0..2 {
            let fwd = moded(j, s) * mode(j + 1, s);
            let bwd = moded(j + 1, s) * mode(j, s);
            hopping = &hopping + &(&fwd + &bwd);
            current = &current + &(&fwd - &bwd);
        }
    }
    let mut h = hopping.scale_real(-p.t0);
    for j in 1..=n {
        let n_up = number_operator(mode(j, 0));
        let n_dn = number_operator(mode(j, 1));
        h = &h + &(&n_up * &n_dn).scale_real(p.u);
    }
    // -i t0 sum (c†_j c_{j+1} - c†_{j+1} c_j): Hermitian lattice current
    let current = current.scale(C64::new(0.0, -p.t0));
    let n_total = c
        .iter()
        .fold(Operator::zeros(dim), |acc, cm| &acc + &number_operator(cm));

    let mut dissipators = Vec::new();
    let label = ["up", "down"];
    let (lo, hi) = (p.big_gamma * (1.0 - p.mu), p.big_gamma * (1.0 + p.mu));
    for (s, spin) in label.iter().enumerate() {
        push_dissipator(&mut dissipators, format!("absorb_1_{spin}"), lo, mode(1, s))?;
    }
    for (s, spin) in label.iter().enumerate() {
        push_dissipator(&mut dissipators, format!("inject_1_{spin}"), hi, moded(1, s))?;
    }
    for (s, spin) in label.iter().enumerate() {
        push_dissipator(&mut dissipators, format!("absorb_{n}_{spin}"), hi, mode(n, s))?;
    }
    for (s, spin) in label.iter().enumerate() {
        push_dissipator(&mut dissipators, format!("inject_{n}_{spin}"), lo, moded(n, s))?;
    }

    let ground = half_filled_ground_state(&h, &n_total, n)?;

    let observables = vec![
        Observable {
            name: "current".into(),
            op: current,
        },
        Observable {
            name: "n_total".into(),
            op: n_total,
        },
    ];
    ModelSpec::new(
        "fermi_hubbard",
        h,
        dissipators,
        observables,
        InitialState::Pure(ground),
        p,
    )
}

/// Ground state of `H + lambda (N - n_particles)^2`, with `lambda` large
/// enough that every other particle-number sector lies higher.
fn half_filled_ground_state(h: &Operator, n_total: &Operator, n_particles: usize) -> Result<Vec<C64>> {
    let dim = h.dim();
    let shift = n_total - &Operator::identity(dim).scale_real(n_particles as f64);
    let penalty = 2.0 * spectral_norm(h) + 1.0;
    let shifted = &(&shift * &shift).scale_real(penalty) + h;
    let e = eigh_descending(&shifted)?;
    let last = dim - 1;
    let gap = e.values[last - 1] - e.values[last];
    if gap < 1e-9 * penalty {
        log::warn!("half-filled ground state is degenerate (gap {gap:.3e}); using the first eigenvector");
    }
    let mut psi: Vec<C64> = (0..dim).map(|i| e.vectors[(i, last)]).collect();
    // fix the global phase: largest component real positive
    let pivot = psi.iter().copied().fold(C64::new(0.0, 0.0), |best, v| {
        if v.norm() > best.norm() + 1e-12 {
            v
        } else {
            best
        }
    });
    let phase = pivot.conj() / pivot.norm();
    for v in psi.iter_mut() {
        *v *= phase;
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(Error::numerical("models", "ground state has zero norm"));
    }
    for v in psi.iter_mut() {
        *v /= norm;
    }
    let filling = n_total.matrix_element(&psi, &psi).re;
    if (filling - n_particles as f64).abs() > 1e-8 {
        return Err(Error::numerical(
            "models",
            format!("ground state not half filled: <N> = {filling}"),
        ));
    }
    Ok(psi)
}

/// Time derivative of a uniformly sampled channel.
///
/// Interior points use central differences; the endpoints use the
/// third-order one-sided stencil when four or more samples exist, and the
/// second-order one otherwise. All stencils are exact for linear data.
pub fn finite_difference(times: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 3 || times.len() != n {
        return Err(Error::precondition(
            "models",
            "derivative needs >= 3 samples on a matching grid",
        ));
    }
    let dt = uniform_step(times).ok_or_else(|| Error::precondition("models", "derivative needs uniform sampling"))?;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * dt);
    }
    if n >= 4 {
        out[0] = (-11.0 * values[0] + 18.0 * values[1] - 9.0 * values[2] + 2.0 * values[3]) / (6.0 * dt);
        let (a, b, c, d) = (values[n - 1], values[n - 2], values[n - 3], values[n - 4]);
        out[n - 1] = (11.0 * a - 18.0 * b + 9.0 * c - 2.0 * d) / (6.0 * dt);
    } else {
        out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt);
        out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dt);
    }
    Ok(out)
}

/// `a(t) = dJ/dt` for the named current channel; the result has a single
/// channel `dipole_acceleration`.
pub fn dipole_acceleration(series: &TimeSeries, current_channel: &str) -> Result<TimeSeries> {
    let values = series
        .channel(current_channel)
        .ok_or_else(|| Error::precondition("models", format!("no channel named {current_channel}")))?;
    let accel = finite_difference(&series.times, values)?;
    let mut out = TimeSeries::new(series.times.clone(), vec!["dipole_acceleration".to_string()]);
    out.channels[0] = accel;
    out.meta = series.meta.clone();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, u: f64) -> HubbardParams {
        HubbardParams {
            n_sites: n,
            t0: 1.0,
            u,
            big_gamma: 0.03,
            mu: 0.9,
        }
    }

    #[test]
    fn two_site_free_ground_energy_from_single_particle_levels() {
        // open two-site chain: single-particle levels -t0, +t0; two
        // particles (one per spin) fill the bonding level twice.
        let m = build_fermi_hubbard(&params(2, 0.0), MemoryCap::default()).unwrap();
        let InitialState::Pure(psi) = &m.initial_state else {
            panic!()
        };
        let energy = m.hamiltonian.matrix_element(psi, psi).re;
        assert!((energy - (-2.0)).abs() < 1e-10, "E0 = {energy}");
        let n_total = &m.observables[1].op;
        assert!((n_total.matrix_element(psi, psi).re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn ground_state_carries_no_current() {
        let m = build_fermi_hubbard(&params(3, 1.0), MemoryCap::default()).unwrap();
        let InitialState::Pure(psi) = &m.initial_state else {
            panic!()
        };
        assert!(m.observables[0].op.matrix_element(psi, psi).re.abs() < 1e-10);
    }

    #[test]
    fn hamiltonian_conserves_particle_number() {
        let m = build_fermi_hubbard(&params(3, 1.0), MemoryCap::default()).unwrap();
        assert!(m.hamiltonian.commutator(&m.observables[1].op).max_abs() < 1e-10);
        assert!(m.observables[0].op.is_hermitian(1e-12));
        assert_eq!(m.dissipators.len(), 8);
    }

    #[test]
    fn derivative_edge_cases() {
        let t: Vec<f64> = (0..6).map(|i| 0.1 * i as f64).collect();
        let constant = finite_difference(&t, &[2.0; 6]).unwrap();
        assert!(constant.iter().all(|a| a.abs() < 1e-12));
        let linear = finite_difference(&t, &t).unwrap();
        assert!(linear.iter().all(|a| (a - 1.0).abs() < 1e-12));
        let three = finite_difference(&t[..3], &t[..3]).unwrap();
        assert!(three.iter().all(|a| (a - 1.0).abs() < 1e-12));
        assert!(finite_difference(&t[..2], &t[..2]).is_err());
        let skewed = [0.0, 0.1, 0.25, 0.3];
        assert!(finite_difference(&skewed, &skewed).is_err());
    }

    #[test]
    fn derivative_of_sine_within_taylor_bound() {
        let omega = 2.3;
        let dt = 0.01;
        let t: Vec<f64> = (0..400).map(|i| dt * i as f64).collect();
        let j: Vec<f64> = t.iter().map(|&x| (omega * x).sin()).collect();
        let a = finite_difference(&t, &j).unwrap();
        let bound = omega.powi(3) * dt * dt / 6.0;
        let worst = t
            .iter()
            .zip(&a)
            .map(|(&x, &ai)| (ai - omega * (omega * x).cos()).abs())
            .fold(0.0, f64::max);
        assert!(worst <= bound * 1.05, "worst {worst:e} bound {bound:e}");
    }
}
