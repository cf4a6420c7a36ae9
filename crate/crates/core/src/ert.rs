// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! Ensemble rank truncation.
//!
//! The density matrix is carried as `rho = sum_k |psi_k><psi_k|` over the
//! columns of an `N_H x L` matrix. Each step maps every member through all
//! Kraus pairs (scaled by `1/sqrt(2K)`), then keeps the `R` dominant
//! principal components of the enlarged ensemble.

use std::time::Instant;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat};
use serde::{Deserialize, Serialize};

use crate::analysis::{RunMeta, TimeSeries, Timings};
use crate::error::{Error, Result};
use crate::kraus::{build_kraus_set, KrausSet};
use crate::linalg::{eigh_descending_unchecked, Operator, SparseOperator, STRUCTURAL_TOL};
use crate::models::{InitialState, ModelSpec};
use crate::{dense_bytes, MemoryCap, C64};

/// Eigenvalues below this fraction of the largest are never retained.
pub const EIGENVALUE_FLOOR: f64 = 1e-14;

/// Ordered list of (generally unnormalized) pure states.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    members: Mat<C64>,
}

impl Ensemble {
    /// Columns of `members` are the states.
    pub fn from_mat(members: Mat<C64>) -> Result<Self> {
        if members.ncols() == 0 || members.nrows() == 0 {
            return Err(Error::precondition("ert", "ensemble needs at least one member"));
        }
        let finite = (0..members.ncols()).all(|c| {
            members
                .col_as_slice(c)
                .iter()
                .all(|z| z.re.is_finite() && z.im.is_finite())
        });
        if !finite {
            return Err(Error::NonFinite { module: "ert" });
        }
        Ok(Ensemble { members })
    }

    pub fn from_members(members: &[Vec<C64>]) -> Result<Self> {
        let dim = members.first().map_or(0, Vec::len);
        if let Some(bad) = members.iter().find(|m| m.len() != dim) {
            return Err(Error::DimensionMismatch {
                module: "ert",
                expected: dim,
                found: bad.len(),
            });
        }
        Self::from_mat(Mat::from_fn(dim, members.len(), |i, j| members[j][i]))
    }

    pub fn dim(&self) -> usize {
        self.members.nrows()
    }

    /// Number of members `L`.
    pub fn len(&self) -> usize {
        self.members.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.members.ncols() == 0
    }

    pub fn member(&self, k: usize) -> &[C64] {
        self.members.col_as_slice(k)
    }

    pub fn as_mat(&self) -> &Mat<C64> {
        &self.members
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.members
    }

    /// `sum_k ||psi_k||^2`.
    pub fn trace(&self) -> f64 {
        (0..self.len()).map(|k| norm_sqr(self.member(k))).sum()
    }

    fn scale(&mut self, factor: f64) {
        for c in 0..self.members.ncols() {
            for z in self.members.col_as_slice_mut(c) {
                *z *= factor;
            }
        }
    }
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErtConfig {
    pub rank: usize,
    pub dt: f64,
    #[serde(default = "default_true")]
    pub renormalize_trace: bool,
    #[serde(skip)]
    pub memory_cap: MemoryCap,
}

fn default_true() -> bool {
    true
}

impl ErtConfig {
    pub fn new(rank: usize, dt: f64) -> Self {
        ErtConfig {
            rank,
            dt,
            renormalize_trace: true,
            memory_cap: MemoryCap::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rank < 1 {
            return Err(Error::precondition("ert", "rank ≥ 1"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::precondition("ert", "dt > 0"));
        }
        Ok(())
    }
}

const NORM_TOL: f64 = 1e-10;

/// Pure state -> one member; mixed `(w_i, phi_i)` -> members `sqrt(w_i) phi_i`.
pub fn init_ensemble(initial: &InitialState) -> Result<Ensemble> {
    let check_normalized = |v: &[C64]| {
        let n = norm_sqr(v);
        if n == 0.0 {
            return Err(Error::precondition("ert", "initial state is the zero vector"));
        }
        if (n.sqrt() - 1.0).abs() > NORM_TOL {
            return Err(Error::precondition(
                "ert",
                format!("initial state not normalized (norm {})", n.sqrt()),
            ));
        }
        Ok(())
    };
    match initial {
        InitialState::Pure(v) => {
            check_normalized(v)?;
            Ensemble::from_members(std::slice::from_ref(v))
        }
        InitialState::Mixed(list) => {
            if list.is_empty() {
                return Err(Error::precondition("ert", "mixed state needs at least one component"));
            }
            let total: f64 = list.iter().map(|(w, _)| w).sum();
            if list.iter().any(|(w, _)| !(*w > 0.0)) {
                return Err(Error::precondition("ert", "mixture weights must be > 0"));
            }
            if (total - 1.0).abs() > NORM_TOL {
                return Err(Error::precondition(
                    "ert",
                    format!("mixture weights sum to {total}, not 1"),
                ));
            }
            let mut members = Vec::with_capacity(list.len());
            for (w, v) in list {
                check_normalized(v)?;
                members.push(v.iter().map(|z| z * w.sqrt()).collect::<Vec<_>>());
            }
            Ensemble::from_members(&members)
        }
    }
}

/// `{U_k psi_l / sqrt(2K), V_k psi_l / sqrt(2K)}`: member blocks ordered
/// `U_1 Psi, V_1 Psi, U_2 Psi, ...`.
pub fn kraus_step(e: &Ensemble, ks: &KrausSet) -> Result<Ensemble> {
    if ks.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            module: "ert",
            expected: ks.dim(),
            found: e.dim(),
        });
    }
    let l = e.len();
    let weight = C64::new(1.0 / (2.0 * ks.len() as f64).sqrt(), 0.0);
    let mut out = Mat::<C64>::zeros(e.dim(), 2 * ks.len() * l);
    let par = faer::get_global_parallelism();
    for (k, pair) in ks.pairs().iter().enumerate() {
        for (slot, op) in [&pair.u, &pair.v].into_iter().enumerate() {
            let start = (2 * k + slot) * l;
            matmul(
                out.as_mut().subcols_mut(start, l),
                Accum::Replace,
                op.as_mat(),
                e.as_mat(),
                weight,
                par,
            );
        }
    }
    Ensemble::from_mat(out)
}

/// How the principal components are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationRoute {
    /// Overlap matrix when `L <= N_H`, density matrix otherwise.
    #[default]
    Auto,
    /// Diagonalize `S = Psi† Psi` (`L x L`) and rotate the members.
    Overlap,
    /// Diagonalize `rho = Psi Psi†` (`N_H x N_H`); members `sqrt(w_k) v_k`.
    Density,
}

/// Result of a truncation with the spectrum that drove it.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub ensemble: Ensemble,
    /// All eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// `sum_{k>R} w_k / sum_k w_k` before renormalization.
    pub discarded_fraction: f64,
}

/// Orthogonalize and keep the top `rank` components. With `renormalize`,
/// the retained members are scaled by `sqrt(sum_all w / sum_kept w)`.
pub fn orthogonalize_truncate(e: &Ensemble, rank: usize, renormalize: bool) -> Result<Ensemble> {
    let target = renormalize.then(|| e.trace());
    Ok(truncate_with(e, rank, target, TruncationRoute::Auto)?.ensemble)
}

/// Core truncation. `target_trace`, when set, is the trace the retained
/// members are rescaled to.
pub fn truncate_with(
    e: &Ensemble,
    rank: usize,
    target_trace: Option<f64>,
    route: TruncationRoute,
) -> Result<Truncation> {
    if rank < 1 {
        return Err(Error::precondition("ert", "rank ≥ 1"));
    }
    let use_density = match route {
        TruncationRoute::Auto => e.len() > e.dim(),
        TruncationRoute::Overlap => false,
        TruncationRoute::Density => true,
    };
    let (eigenvalues, mut kept) = if use_density {
        density_components(e, rank)?
    } else {
        overlap_components(e, rank)?
    };
    reorthogonalize(&mut kept);
    let total: f64 = eigenvalues.iter().map(|w| w.max(0.0)).sum();
    let kept_weight: f64 = (0..kept.ncols()).map(|k| norm_sqr(kept.col_as_slice(k))).sum();
    let mut ensemble = Ensemble::from_mat(kept)?;
    if let Some(t) = target_trace {
        ensemble.scale((t / kept_weight).sqrt());
    }
    Ok(Truncation {
        ensemble,
        eigenvalues,
        discarded_fraction: ((total - kept_weight) / total).max(0.0),
    })
}

fn retained_count(values: &[f64], rank: usize) -> Result<usize> {
    let w1 = values.first().copied().unwrap_or(0.0);
    if !(w1 > 0.0) {
        return Err(Error::numerical(
            "ert",
            "all overlap eigenvalues are <= 0 (ensemble of zero vectors)",
        ));
    }
    Ok(values
        .iter()
        .take(rank)
        .take_while(|&&w| w >= EIGENVALUE_FLOOR * w1 && w > 0.0)
        .count())
}

fn overlap_components(e: &Ensemble, rank: usize) -> Result<(Vec<f64>, Mat<C64>)> {
    let psi = e.as_mat();
    let s = psi.adjoint() * psi;
    let eig = eigh_descending_unchecked(s.as_ref())?;
    let r = retained_count(&eig.values, rank)?;
    let kept = psi * eig.vectors.as_ref().subcols(0, r);
    Ok((eig.values, kept))
}

fn density_components(e: &Ensemble, rank: usize) -> Result<(Vec<f64>, Mat<C64>)> {
    let psi = e.as_mat();
    let rho = psi * psi.adjoint();
    let eig = eigh_descending_unchecked(rho.as_ref())?;
    let r = retained_count(&eig.values, rank)?;
    let kept = Mat::from_fn(e.dim(), r, |i, k| eig.vectors[(i, k)] * eig.values[k].sqrt());
    Ok((eig.values, kept))
}

/// One modified Gram-Schmidt sweep in column order. The columns are
/// already orthogonal up to rounding; this removes the residual overlap
/// that the overlap route leaves between strongly and weakly weighted
/// components.
fn reorthogonalize(m: &mut Mat<C64>) {
    let r = m.ncols();
    for j in 1..r {
        for i in 0..j {
            let ni = norm_sqr(m.col_as_slice(i));
            if ni == 0.0 {
                continue;
            }
            let c = dot(m.col_as_slice(i), m.col_as_slice(j)) / ni;
            let src = m.col_as_slice(i).to_vec();
            for (d, v) in m.col_as_slice_mut(j).iter_mut().zip(&src) {
                *d -= c * v;
            }
        }
    }
}

/// `sum_k <psi_k|O|psi_k>`. `O` must be Hermitian within 1e-10.
pub fn expectation(e: &Ensemble, o: &Operator) -> Result<f64> {
    if o.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            module: "ert",
            expected: e.dim(),
            found: o.dim(),
        });
    }
    o.ensure_hermitian("ert", STRUCTURAL_TOL)?;
    let applied = o.as_mat() * e.as_mat();
    let mut total = C64::new(0.0, 0.0);
    for k in 0..e.len() {
        total += dot(e.member(k), applied.col_as_slice(k));
    }
    real_part(total)
}

fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > 1e-8 * (1.0 + z.re.abs()) {
        return Err(Error::numerical(
            "ert",
            format!("expectation has imaginary part {:.3e}", z.im),
        ));
    }
    Ok(z.re)
}

/// `sum_k |psi_k><psi_k|`.
pub fn reconstruct_density(e: &Ensemble) -> Operator {
    Operator::from_mat_unchecked(e.as_mat() * e.as_mat().adjoint())
}

/// State handed to an [`evolve_observed`] callback at every sampled step.
pub struct StepView<'a> {
    pub step: usize,
    pub time: f64,
    pub ensemble: &'a Ensemble,
    /// Whether this step ended with a truncation.
    pub truncated: bool,
}

/// Number of steps of size `dt` covering `t_final`.
pub(crate) fn step_count(t_final: f64, dt: f64, module: &'static str) -> Result<usize> {
    if !(t_final > 0.0) || !t_final.is_finite() {
        return Err(Error::precondition(module, "t_final > 0"));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::precondition(module, "dt > 0"));
    }
    let steps = (t_final / dt).round();
    if steps < 1.0 {
        return Err(Error::precondition(module, "t_final shorter than one step"));
    }
    if (steps * dt - t_final).abs() > 1e-6 * dt {
        log::warn!("{module}: t_final = {t_final} is not a multiple of dt = {dt}; running {steps} steps");
    }
    Ok(steps as usize)
}

pub fn evolve(model: &ModelSpec, cfg: &ErtConfig, t_final: f64, sample_every: usize) -> Result<TimeSeries> {
    evolve_observed(model, cfg, t_final, sample_every, |_| Ok(()))
}

/// [`evolve`] with a callback invoked at every sampled step (after any
/// truncation, alongside the observable evaluation).
pub fn evolve_observed(
    model: &ModelSpec,
    cfg: &ErtConfig,
    t_final: f64,
    sample_every: usize,
    mut observer: impl FnMut(&StepView<'_>) -> Result<()>,
) -> Result<TimeSeries> {
    let started = Instant::now();
    cfg.validate()?;
    if sample_every < 1 {
        return Err(Error::precondition("ert", "sample_every >= 1"));
    }
    let n_steps = step_count(t_final, cfg.dt, "ert")?;
    let dim = model.dim();
    let dissipators = model.dissipators_or_zero();
    let k = dissipators.len();
    // Kraus pairs, two ensembles of 2K R members, overlap workspace.
    let members = 2 * k * cfg.rank;
    let overlap = members.min(dim).pow(2) + 2 * dim * dim;
    let required = dense_bytes(dim, 2 * k) + 2 * (members as u128) * (dim as u128) * 16 + overlap as u128 * 16;
    cfg.memory_cap.check("ert", required)?;

    let ks = build_kraus_set(&model.hamiltonian, &dissipators, cfg.dt)?;
    let observables: Vec<SparseOperator> = model
        .observables
        .iter()
        .map(|o| SparseOperator::from_dense(&o.op))
        .collect();
    let mut ensemble = init_ensemble(&model.initial_state)?;
    let initial_trace = ensemble.trace();
    let mut series = TimeSeries::empty(model.observable_names());
    let mut timings = Timings {
        setup: started.elapsed().as_secs_f64(),
        ..Timings::default()
    };
    let mut values = vec![0.0; observables.len()];

    let mut sample =
        |step: usize, e: &Ensemble, truncated: bool, series: &mut TimeSeries, timings: &mut Timings| -> Result<()> {
            let t0 = Instant::now();
            for (slot, o) in values.iter_mut().zip(&observables) {
                *slot = real_part(o.ensemble_expectation(e.as_mat()))?;
            }
            let time = step as f64 * cfg.dt;
            series.push(time, &values);
            observer(&StepView {
                step,
                time,
                ensemble: e,
                truncated,
            })?;
            timings.observe += t0.elapsed().as_secs_f64();
            Ok(())
        };
    sample(0, &ensemble, false, &mut series, &mut timings)?;

    for step in 1..=n_steps {
        let t0 = Instant::now();
        let grown = kraus_step(&ensemble, &ks)?;
        timings.propagate += t0.elapsed().as_secs_f64();
        let t1 = Instant::now();
        let truncated = grown.len() > cfg.rank;
        let target = cfg.renormalize_trace.then_some(initial_trace);
        ensemble = if truncated {
            truncate_with(&grown, cfg.rank, target, TruncationRoute::Auto)?.ensemble
        } else {
            let mut e = grown;
            if let Some(t) = target {
                let current = e.trace();
                if !(current > 0.0) {
                    return Err(Error::numerical("ert", "ensemble trace vanished"));
                }
                e.scale((t / current).sqrt());
            }
            e
        };
        timings.truncate += t1.elapsed().as_secs_f64();
        if step % sample_every == 0 {
            sample(step, &ensemble, truncated, &mut series, &mut timings)?;
        }
    }
    timings.total = started.elapsed().as_secs_f64();
    series.meta = RunMeta {
        solver: "ert".into(),
        model: model.name.clone(),
        params: serde_json::json!({
            "model": model.params,
            "rank": cfg.rank,
            "dt": cfg.dt,
            "renormalize_trace": cfg.renormalize_trace,
            "t_final": t_final,
            "sample_every": sample_every,
        }),
        timings,
    };
    Ok(series)
}
