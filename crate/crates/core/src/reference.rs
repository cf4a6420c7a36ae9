// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! Reference solvers: a fixed-step RK4 integrator of the full Lindblad
//! equation and a first-order quantum-jump Monte Carlo solver.

use std::time::Instant;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, Par};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{RunMeta, TimeSeries, Timings};
use crate::error::{Error, Result};
use crate::ert::step_count;
use crate::linalg::{expm, Operator, SparseOperator};
use crate::models::{InitialState, ModelSpec};
use crate::{dense_bytes, MemoryCap, C64};

const I: C64 = C64::new(0.0, 1.0);

/// Dense Lindblad superoperator acting on `vec(rho)`, where
/// `vec(rho)[i N + j] = rho[i, j]`. In this ordering
/// `vec(A rho B) = (A ⊗ B^T) vec(rho)`.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    pub matrix: Mat<C64>,
    dim: usize,
}

impl Liouvillian {
    /// Hilbert-space dimension `N_H`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, rho: &Operator) -> Result<Operator> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                module: "reference",
                expected: self.dim,
                found: rho.dim(),
            });
        }
        let n = self.dim;
        let v = Mat::from_fn(n * n, 1, |r, _| rho.get(r / n, r % n));
        let out = &self.matrix * &v;
        Ok(Operator::from_mat_unchecked(Mat::from_fn(n, n, |i, j| {
            out[(i * n + j, 0)]
        })))
    }
}

/// `-i(H ⊗ I - I ⊗ H^T) + sum_k [A_k ⊗ A_k^* - (A_k†A_k ⊗ I + I ⊗ (A_k†A_k)^T)/2]`.
pub fn build_liouvillian(model: &ModelSpec, cap: MemoryCap) -> Result<Liouvillian> {
    let n = model.dim();
    let n2 = n
        .checked_mul(n)
        .ok_or_else(|| Error::precondition("reference", "Liouvillian dimension overflows"))?;
    cap.check("reference", dense_bytes(n2, 1))?;
    let h = &model.hamiltonian;
    let mut l = Mat::<C64>::zeros(n2, n2);
    // entry ((i N + k), (j N + m)) of a ⊗ b is a[i,j] b[k,m]
    let mut add_kron = |a: &dyn Fn(usize, usize) -> C64, b: &dyn Fn(usize, usize) -> C64, sparse_a: bool| {
        for i in 0..n {
            for j in 0..n {
                let aij = a(i, j);
                if sparse_a && aij == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..n {
                    for m in 0..n {
                        let bkm = b(k, m);
                        if bkm != C64::new(0.0, 0.0) {
                            l[(i * n + k, j * n + m)] += aij * bkm;
                        }
                    }
                }
            }
        }
    };
    let eye = |i: usize, j: usize| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
    add_kron(&|i, j| -I * h.get(i, j), &eye, true);
    add_kron(&eye, &|k, m| I * h.get(m, k), true);
    for a in &model.dissipators {
        let ada = &a.adjoint() * a;
        add_kron(&|i, j| a.get(i, j), &|k, m| a.get(k, m).conj(), true);
        add_kron(&|i, j| ada.get(i, j) * -0.5, &eye, true);
        add_kron(&eye, &|k, m| ada.get(m, k) * -0.5, true);
    }
    Ok(Liouvillian { matrix: l, dim: n })
}

/// Sparse right-hand side `L(rho) = X + X† + sum_k A_k rho A_k†` with
/// `X = -i H_eff rho`, valid for Hermitian `rho`.
struct LindbladRhs {
    h_eff: SparseOperator,
    jumps: Vec<(SparseOperator, SparseOperator)>,
}

impl LindbladRhs {
    fn new(model: &ModelSpec) -> Self {
        let dim = model.dim();
        let mut decay = Operator::zeros(dim);
        for a in &model.dissipators {
            decay = &decay + &(&a.adjoint() * a);
        }
        let h_eff = &model.hamiltonian - &decay.scale(C64::new(0.0, 0.5));
        LindbladRhs {
            h_eff: SparseOperator::from_dense(&h_eff),
            jumps: model
                .dissipators
                .iter()
                .map(|a| (SparseOperator::from_dense(a), SparseOperator::from_dense(&a.adjoint())))
                .collect(),
        }
    }

    fn eval(&self, rho: &Mat<C64>, out: &mut Mat<C64>, scratch: &mut Mat<C64>) {
        let n = rho.nrows();
        scratch.fill(C64::new(0.0, 0.0));
        self.h_eff.mul_dense_acc(rho, scratch, -I);
        for j in 0..n {
            for i in 0..n {
                out[(i, j)] = scratch[(i, j)] + scratch[(j, i)].conj();
            }
        }
        for (a, a_adj) in &self.jumps {
            scratch.fill(C64::new(0.0, 0.0));
            a.mul_dense_acc(rho, scratch, C64::new(1.0, 0.0));
            a_adj.dense_mul_acc(scratch, out, C64::new(1.0, 0.0));
        }
    }
}

fn axpy(out: &mut Mat<C64>, base: &Mat<C64>, alpha: f64, x: &Mat<C64>) {
    for c in 0..out.ncols() {
        let (o, b, xv) = (out.col_as_slice_mut(c), base.col_as_slice(c), x.col_as_slice(c));
        for ((o, b), xv) in o.iter_mut().zip(b).zip(xv) {
            *o = b + xv * alpha;
        }
    }
}

/// Fixed-step RK4 for `d rho/dt = L(rho)` in matrix form. Observables are
/// `Tr(O rho)`; trace and positivity are monitored, not enforced.
pub fn exact_evolve(
    model: &ModelSpec,
    dt: f64,
    t_final: f64,
    sample_every: usize,
    cap: MemoryCap,
) -> Result<TimeSeries> {
    exact_evolve_observed(model, dt, t_final, sample_every, cap, |_, _| Ok(()))
}

/// [`exact_evolve`] with a callback receiving `(time, rho)` at every
/// sampled step.
pub fn exact_evolve_observed(
    model: &ModelSpec,
    dt: f64,
    t_final: f64,
    sample_every: usize,
    cap: MemoryCap,
    mut observer: impl FnMut(f64, &Mat<C64>) -> Result<()>,
) -> Result<TimeSeries> {
    let started = Instant::now();
    if sample_every < 1 {
        return Err(Error::precondition("reference", "sample_every >= 1"));
    }
    let n_steps = step_count(t_final, dt, "reference")?;
    let n = model.dim();
    cap.check("reference", dense_bytes(n, 8))?;
    let rhs = LindbladRhs::new(model);
    let observables: Vec<SparseOperator> = model
        .observables
        .iter()
        .map(|o| SparseOperator::from_dense(&o.op))
        .collect();
    let mut rho = model.initial_state.density().into_mat();
    let initial_trace = trace(&rho);
    let (mut k1, mut k2, mut k3, mut k4) = (Mat::zeros(n, n), Mat::zeros(n, n), Mat::zeros(n, n), Mat::zeros(n, n));
    let (mut stage, mut scratch) = (Mat::zeros(n, n), Mat::zeros(n, n));
    let mut series = TimeSeries::empty(model.observable_names());
    let mut timings = Timings {
        setup: started.elapsed().as_secs_f64(),
        ..Timings::default()
    };
    let mut values = vec![0.0; observables.len()];
    let mut worst_trace = 0.0f64;

    let mut sample = |step: usize, rho: &Mat<C64>, series: &mut TimeSeries| -> Result<()> {
        for (v, o) in values.iter_mut().zip(&observables) {
            *v = o.trace_product(rho).re;
        }
        let time = step as f64 * dt;
        series.push(time, &values);
        observer(time, rho)
    };
    sample(0, &rho, &mut series)?;
    for step in 1..=n_steps {
        let t0 = Instant::now();
        rhs.eval(&rho, &mut k1, &mut scratch);
        axpy(&mut stage, &rho, 0.5 * dt, &k1);
        rhs.eval(&stage, &mut k2, &mut scratch);
        axpy(&mut stage, &rho, 0.5 * dt, &k2);
        rhs.eval(&stage, &mut k3, &mut scratch);
        axpy(&mut stage, &rho, dt, &k3);
        rhs.eval(&stage, &mut k4, &mut scratch);
        for c in 0..n {
            let r = rho.col_as_slice_mut(c);
            let (a, b, cc, d) = (
                k1.col_as_slice(c),
                k2.col_as_slice(c),
                k3.col_as_slice(c),
                k4.col_as_slice(c),
            );
            for i in 0..n {
                r[i] += (a[i] + (b[i] + cc[i]) * 2.0 + d[i]) * (dt / 6.0);
            }
        }
        timings.propagate += t0.elapsed().as_secs_f64();
        if step % sample_every == 0 {
            let t1 = Instant::now();
            let tr = trace(&rho);
            if !tr.is_finite() {
                return Err(Error::numerical(
                    "reference",
                    format!("density matrix diverged at step {step}; reduce dt"),
                ));
            }
            worst_trace = worst_trace.max((tr - initial_trace).abs());
            sample(step, &rho, &mut series)?;
            timings.observe += t1.elapsed().as_secs_f64();
        }
    }
    if worst_trace > 1e-8 {
        log::warn!("reference: trace drifted by {worst_trace:.3e}");
    }
    timings.total = started.elapsed().as_secs_f64();
    series.meta = RunMeta {
        solver: "exact".into(),
        model: model.name.clone(),
        params: serde_json::json!({
            "model": model.params,
            "dt": dt,
            "t_final": t_final,
            "sample_every": sample_every,
            "integrator": "rk4",
        }),
        timings,
    };
    Ok(series)
}

fn trace(rho: &Mat<C64>) -> f64 {
    (0..rho.nrows()).map(|i| rho[(i, i)].re).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WmcConfig {
    pub n_traj: usize,
    pub seed: u64,
    pub dt: f64,
    #[serde(skip)]
    pub memory_cap: MemoryCap,
}

impl WmcConfig {
    pub fn new(n_traj: usize, seed: u64, dt: f64) -> Self {
        WmcConfig {
            n_traj,
            seed,
            dt,
            memory_cap: MemoryCap::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_traj < 1 {
            return Err(Error::precondition("reference", "n_traj >= 1"));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::precondition("reference", "dt > 0"));
        }
        Ok(())
    }
}

/// Largest total jump probability allowed in one step.
pub const MAX_JUMP_PROBABILITY: f64 = 0.1;

/// Everything a trajectory needs, built once per run.
struct JumpPropagator {
    no_jump: Mat<C64>,
    jumps: Vec<SparseOperator>,
    rates: Vec<SparseOperator>,
    observables: Vec<SparseOperator>,
    initial: Vec<C64>,
    dt: f64,
}

impl JumpPropagator {
    fn new(model: &ModelSpec, cfg: &WmcConfig) -> Result<Self> {
        cfg.validate()?;
        let n = model.dim();
        cap_check_wmc(n, cfg.memory_cap)?;
        let InitialState::Pure(initial) = &model.initial_state else {
            return Err(Error::precondition(
                "reference",
                "quantum-jump solver needs a pure initial state",
            ));
        };
        let mut decay = Operator::zeros(n);
        let mut rates = Vec::with_capacity(model.dissipators.len());
        for a in &model.dissipators {
            let ada = &a.adjoint() * a;
            decay = &decay + &ada;
            rates.push(SparseOperator::from_dense(&ada));
        }
        let h_eff = &model.hamiltonian - &decay.scale(C64::new(0.0, 0.5));
        let no_jump = expm(&h_eff.scale(C64::new(0.0, -cfg.dt)))?.into_mat();
        Ok(JumpPropagator {
            no_jump,
            jumps: model.dissipators.iter().map(SparseOperator::from_dense).collect(),
            rates,
            observables: model
                .observables
                .iter()
                .map(|o| SparseOperator::from_dense(&o.op))
                .collect(),
            initial: initial.clone(),
            dt: cfg.dt,
        })
    }

    /// Runs one trajectory, calling `record(sample_index, values)` at every
    /// sampled step. Returns the jump count.
    fn run(
        &self,
        seed: u64,
        traj_index: u64,
        n_steps: usize,
        sample_every: usize,
        mut record: impl FnMut(usize, &[f64]),
    ) -> Result<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(traj_index);
        let n = self.initial.len();
        let mut psi = Mat::from_fn(n, 1, |i, _| self.initial[i]);
        let mut next = Mat::<C64>::zeros(n, 1);
        let mut values = vec![0.0; self.observables.len()];
        let mut probs = vec![0.0; self.jumps.len()];
        let mut jumps = 0;
        let mut observe = |psi: &Mat<C64>, slot: usize, values: &mut Vec<f64>| {
            for (v, o) in values.iter_mut().zip(&self.observables) {
                *v = o.ensemble_expectation(psi).re;
            }
            record(slot, values);
        };
        observe(&psi, 0, &mut values);
        for step in 1..=n_steps {
            let mut total = 0.0;
            for (p, r) in probs.iter_mut().zip(&self.rates) {
                *p = self.dt * r.ensemble_expectation(&psi).re.max(0.0);
                total += *p;
            }
            if total >= MAX_JUMP_PROBABILITY {
                return Err(Error::precondition(
                    "reference",
                    format!("jump probability {total:.3} per step >= {MAX_JUMP_PROBABILITY}; reduce dt"),
                ));
            }
            let draw: f64 = rng.random();
            if draw < total {
                let mut acc = 0.0;
                let mut chosen = probs.len() - 1;
                for (k, p) in probs.iter().enumerate() {
                    acc += p;
                    if draw < acc {
                        chosen = k;
                        break;
                    }
                }
                next = self.jumps[chosen].mul_dense(&psi);
                jumps += 1;
            } else {
                matmul(
                    next.as_mut(),
                    Accum::Replace,
                    self.no_jump.as_ref(),
                    psi.as_ref(),
                    C64::new(1.0, 0.0),
                    Par::Seq,
                );
            }
            let norm = next.col_as_slice(0).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(Error::numerical("reference", "trajectory norm vanished"));
            }
            for z in next.col_as_slice_mut(0) {
                *z /= norm;
            }
            std::mem::swap(&mut psi, &mut next);
            if step % sample_every == 0 {
                observe(&psi, step / sample_every, &mut values);
            }
        }
        Ok(jumps)
    }
}

fn cap_check_wmc(n: usize, cap: MemoryCap) -> Result<()> {
    // propagator, effective Hamiltonian, build temporaries
    cap.check("reference", dense_bytes(n, 6))
}

fn grid(n_steps: usize, sample_every: usize, dt: f64) -> Vec<f64> {
    (0..=n_steps / sample_every)
        .map(|s| (s * sample_every) as f64 * dt)
        .collect()
}

/// One stochastic trajectory, a deterministic function of
/// `(cfg.seed, traj_index)`. The jump count is stored in
/// `meta.params["jumps"]`.
pub fn wmc_trajectory(
    model: &ModelSpec,
    cfg: &WmcConfig,
    t_final: f64,
    sample_every: usize,
    traj_index: u64,
) -> Result<TimeSeries> {
    let started = Instant::now();
    if sample_every < 1 {
        return Err(Error::precondition("reference", "sample_every >= 1"));
    }
    let n_steps = step_count(t_final, cfg.dt, "reference")?;
    let prop = JumpPropagator::new(model, cfg)?;
    let mut series = TimeSeries::new(grid(n_steps, sample_every, cfg.dt), model.observable_names());
    let jumps = prop.run(cfg.seed, traj_index, n_steps, sample_every, |slot, v| {
        for (c, &x) in series.channels.iter_mut().zip(v) {
            c[slot] = x;
        }
    })?;
    series.meta = RunMeta {
        solver: "wmc_trajectory".into(),
        model: model.name.clone(),
        params: serde_json::json!({
            "model": model.params,
            "seed": cfg.seed,
            "dt": cfg.dt,
            "traj_index": traj_index,
            "jumps": jumps,
        }),
        timings: Timings {
            total: started.elapsed().as_secs_f64(),
            ..Timings::default()
        },
    };
    Ok(series)
}

/// Trajectories per deterministic reduction chunk.
const CHUNK: usize = 32;

struct Moments {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    jumps: usize,
}

/// Trajectory average with per-sample standard errors. Trajectories are
/// reduced in fixed index-ordered chunks, so the result does not depend on
/// the worker count or scheduling.
pub fn wmc_evolve(model: &ModelSpec, cfg: &WmcConfig, t_final: f64, sample_every: usize) -> Result<TimeSeries> {
    let started = Instant::now();
    if sample_every < 1 {
        return Err(Error::precondition("reference", "sample_every >= 1"));
    }
    let n_steps = step_count(t_final, cfg.dt, "reference")?;
    let prop = JumpPropagator::new(model, cfg)?;
    let times = grid(n_steps, sample_every, cfg.dt);
    let n_obs = model.observables.len();
    let width = times.len() * n_obs;
    let setup = started.elapsed().as_secs_f64();

    let n_chunks = cfg.n_traj.div_ceil(CHUNK);
    let chunks: Vec<Result<Moments>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut m = Moments {
                sum: vec![0.0; width],
                sum_sq: vec![0.0; width],
                jumps: 0,
            };
            for traj in c * CHUNK..((c + 1) * CHUNK).min(cfg.n_traj) {
                m.jumps += prop.run(cfg.seed, traj as u64, n_steps, sample_every, |slot, v| {
                    for (o, &x) in v.iter().enumerate() {
                        m.sum[slot * n_obs + o] += x;
                        m.sum_sq[slot * n_obs + o] += x * x;
                    }
                })?;
            }
            Ok(m)
        })
        .collect();
    let mut sum = vec![0.0; width];
    let mut sum_sq = vec![0.0; width];
    let mut jumps = 0;
    for chunk in chunks {
        let m = chunk?;
        for i in 0..width {
            sum[i] += m.sum[i];
            sum_sq[i] += m.sum_sq[i];
        }
        jumps += m.jumps;
    }
    let n = cfg.n_traj as f64;
    let mut series = TimeSeries::new(times, model.observable_names());
    let mut errors = vec![vec![0.0; series.len()]; n_obs];
    for slot in 0..series.len() {
        for o in 0..n_obs {
            let mean = sum[slot * n_obs + o] / n;
            series.channels[o][slot] = mean;
            if cfg.n_traj > 1 {
                let var = ((sum_sq[slot * n_obs + o] - n * mean * mean) / (n - 1.0)).max(0.0);
                errors[o][slot] = (var / n).sqrt();
            }
        }
    }
    series.std_errors = Some(errors);
    let total = started.elapsed().as_secs_f64();
    series.meta = RunMeta {
        solver: "wmc".into(),
        model: model.name.clone(),
        params: serde_json::json!({
            "model": model.params,
            "n_traj": cfg.n_traj,
            "seed": cfg.seed,
            "dt": cfg.dt,
            "t_final": t_final,
            "sample_every": sample_every,
            "mean_jumps": jumps as f64 / n,
        }),
        timings: Timings {
            setup,
            propagate: total - setup,
            total,
            ..Timings::default()
        },
    };
    Ok(series)
}
