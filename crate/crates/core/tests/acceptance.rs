// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one line per criterion and exits nonzero when
//! any criterion fails. Pass criterion numbers as arguments to run a subset:
//! `cargo test --test acceptance -- 3 7`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use ert_core::analysis::{
    benchmark_sweep, fit_through_origin, integrated_error, integrated_error_report, log_log_slope, power_spectrum,
    steady_state_current, SweepResult, SweepSpec, TimeSeries, Window,
};
use ert_core::ert::{
    evolve, evolve_observed, reconstruct_density, truncate_with, Ensemble, ErtConfig, TruncationRoute,
};
use ert_core::kraus::{build_kraus_set, completeness_residual};
use ert_core::linalg::Operator;
use ert_core::models::{
    build_cavity, build_fermi_hubbard, build_heisenberg, dipole_acceleration, CavityParams, HubbardParams, ModelSpec,
    QubitState, SpinChainParams,
};
use ert_core::reference::{exact_evolve, wmc_evolve, WmcConfig};
use ert_core::{MemoryCap, Result, C64};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn cap() -> MemoryCap {
    MemoryCap::default()
}

fn chain(n: usize, big_gamma: f64) -> ModelSpec {
    build_heisenberg(&SpinChainParams::unit(n, 0.0, big_gamma, 0.9), cap()).unwrap()
}

fn cavity(n_atoms: usize, gamma: f64) -> ModelSpec {
    build_cavity(&CavityParams::detuning_ladder(n_atoms, 6, 1.0, 0.1, 0.1, gamma), cap()).unwrap()
}

fn hubbard(n_sites: usize, big_gamma: f64) -> ModelSpec {
    build_fermi_hubbard(
        &HubbardParams {
            n_sites,
            t0: 1.0,
            u: 1.0,
            big_gamma,
            mu: 0.9,
        },
        cap(),
    )
    .unwrap()
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let t = Instant::now();
    let v = f()?;
    Ok((v, t.elapsed().as_secs_f64()))
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn analytic_error(s: &TimeSeries, channel: &str, f: impl Fn(f64) -> f64) -> f64 {
    let values = s.channel(channel).unwrap();
    s.times
        .iter()
        .zip(values)
        .map(|(&t, v)| (v - f(t)).abs())
        .fold(0.0, f64::max)
}

fn criterion_1() -> Result<Outcome> {
    let gamma: f64 = 0.1;
    let (t_final, every) = (20.0, 10);
    let decay = qubit(gamma, 0.0, 0.0, QubitState::Excited);
    let dephase = qubit(0.0, gamma, 0.0, QubitState::Plus);
    let ert = ErtConfig::new(2, 1e-3);
    let checks = [
        (
            "decay exact",
            analytic_error(&exact_evolve(&decay, 1e-3, t_final, every, cap())?, "p_excited", |t| {
                (-gamma * t).exp()
            }),
            1e-8,
        ),
        (
            "decay ert",
            analytic_error(&evolve(&decay, &ert, t_final, every)?, "p_excited", |t| {
                (-gamma * t).exp()
            }),
            2e-3,
        ),
        (
            "dephasing exact",
            analytic_error(&exact_evolve(&dephase, 1e-3, t_final, every, cap())?, "sx", |t| {
                (-2.0 * gamma * t).exp()
            }),
            1e-8,
        ),
        (
            "dephasing ert",
            analytic_error(&evolve(&dephase, &ert, t_final, every)?, "sx", |t| {
                (-2.0 * gamma * t).exp()
            }),
            2e-3,
        ),
    ];
    let pass = checks.iter().all(|(_, err, tol)| err <= tol);
    let detail = checks
        .iter()
        .map(|(n, e, tol)| format!("{n} {e:.2e} (<= {tol:.0e})"))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(pass, detail)
}

fn random_density(seed: u64, dim: usize, rank: usize) -> Operator {
    let mut r = rng(seed);
    let mut rho = Operator::zeros(dim);
    for _ in 0..rank {
        rho = &rho + &projector(&random_vec(&mut r, dim));
    }
    let tr = rho.trace().re;
    rho.scale_real(1.0 / tr)
}

fn criterion_2() -> Result<Outcome> {
    let models = [
        (
            "heisenberg N=4",
            build_heisenberg(&SpinChainParams::unit(4, 0.05, 0.1, 0.9), cap())?,
        ),
        ("cavity 2 atoms", cavity(2, 0.05)),
        ("hubbard N=3", hubbard(3, 0.03)),
    ];
    let (dt1, dt2) = (2e-3, 1e-3);
    let in_band = |r: f64| (3.2..=4.8).contains(&r);
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, (name, m)) in models.iter().enumerate() {
        assert!(m.dim() <= 64);
        let rho = random_density(100 + i as u64, m.dim(), 3);
        let step_error = |dt: f64| -> Result<(f64, f64)> {
            let ks = build_kraus_set(&m.hamiltonian, &m.dissipators, dt)?;
            let err = ks
                .apply_to_density(&rho)
                .max_abs_diff(&euler_step(&m.hamiltonian, &m.dissipators, &rho, dt));
            Ok((completeness_residual(&ks), err))
        };
        let ((c1, e1), (c2, e2)) = (step_error(dt1)?, step_error(dt2)?);
        pass &= in_band(c1 / c2) && in_band(e1 / e2);
        parts.push(format!("{name}: residual x{:.2}, map error x{:.2}", c1 / c2, e1 / e2));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_3() -> Result<Outcome> {
    let m = chain(4, 1e-3);
    let exact = exact_evolve(&m, 1e-3, 10.0, 10, cap())?;
    let dts: [f64; 3] = [2e-3, 1e-3, 5e-4];
    let mut errors = Vec::new();
    for dt in dts {
        let every = (1e-2 / dt).round() as usize;
        let s = evolve(&m, &ErtConfig::new(m.dim(), dt), 10.0, every)?;
        errors.push(integrated_error(&exact, &s)?);
    }
    let ratios = [errors[0] / errors[1], errors[1] / errors[2]];
    let pass = ratios.iter().all(|r| (1.6..=2.4).contains(r)) && errors[1] <= 1e-3;
    outcome(
        pass,
        format!(
            "E(dt) = {:.2e}, {:.2e}, {:.2e}; halving ratios {:.2}, {:.2}; E(1e-3) <= 1e-3",
            errors[0], errors[1], errors[2], ratios[0], ratios[1]
        ),
    )
}

fn criterion_4() -> Result<Outcome> {
    let mut g = rng(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let dim = g.random_range(2..=40usize);
        let r = g.random_range(1..=dim.min(8));
        let len = r + g.random_range(0..=2 * dim);
        let basis: Vec<Vec<C64>> = (0..r).map(|_| random_vec(&mut g, dim)).collect();
        let mut members: Vec<Vec<C64>> = (0..len)
            .map(|_| {
                let coeffs = random_vec(&mut g, r);
                (0..dim)
                    .map(|i| basis.iter().zip(&coeffs).map(|(b, c)| b[i] * c).sum())
                    .collect()
            })
            .collect();
        let trace: f64 = members.iter().flatten().map(|z| z.norm_sqr()).sum();
        for m in &mut members {
            m.iter_mut().for_each(|z| *z /= trace.sqrt());
        }
        let e = Ensemble::from_members(&members)?;
        let oracle = eigen_truncate(&reconstruct_density(&e), r);
        for route in [
            TruncationRoute::Auto,
            TruncationRoute::Overlap,
            TruncationRoute::Density,
        ] {
            let t = truncate_with(&e, r, None, route)?;
            worst = worst.max(reconstruct_density(&t.ensemble).max_abs_diff(&oracle));
        }
    }
    outcome(
        worst <= 1e-10,
        format!("100 random instances, all routes, worst deviation {worst:.2e} (<= 1e-10)"),
    )
}

fn sz_channels(s: &TimeSeries) -> TimeSeries {
    let names: Vec<&str> = s
        .names
        .iter()
        .map(String::as_str)
        .filter(|n| n.starts_with("sz_"))
        .collect();
    s.select(&names).unwrap()
}

fn criterion_5() -> Result<Outcome> {
    let m = chain(8, 1e-3);
    let exact = sz_channels(&exact_evolve(&m, 1e-3, 10.0, 10, cap())?);
    let (ert, ert_secs) = timed(|| evolve(&m, &ErtConfig::new(1, 1e-3), 10.0, 10))?;
    let (wmc, wmc_secs) = timed(|| wmc_evolve(&m, &WmcConfig::new(1000, 5, 1e-2), 10.0, 1))?;
    let e_ert = integrated_error(&exact, &sz_channels(&ert))?;
    let e_wmc = integrated_error(&exact, &sz_channels(&wmc))?;
    let pass = e_ert <= 5e-2 && e_ert < e_wmc && ert_secs <= wmc_secs;
    outcome(
        pass,
        format!("N=8: ERT R=1 E={e_ert:.2e} in {ert_secs:.1}s; WMC 1000 traj E={e_wmc:.2e} in {wmc_secs:.1}s"),
    )
}

fn wmc_slope(m: &ModelSpec, exact: &TimeSeries, dt: f64, t_final: f64, every: usize) -> Result<(f64, Vec<f64>)> {
    const SEEDS: u64 = 8;
    let counts = [100usize, 400, 1600];
    let mut rms = Vec::new();
    for &n in &counts {
        let mut sq = 0.0;
        for seed in 0..SEEDS {
            let s = wmc_evolve(m, &WmcConfig::new(n, 1000 + seed, dt), t_final, every)?;
            sq += integrated_error(exact, &s)?.powi(2);
        }
        rms.push((sq / SEEDS as f64).sqrt());
    }
    let x: Vec<f64> = counts.iter().map(|&n| n as f64).collect();
    Ok((log_log_slope(&x, &rms)?, rms))
}

fn criterion_6() -> Result<Outcome> {
    let q = qubit(0.1, 0.0, 0.0, QubitState::Excited);
    let q_exact = exact_evolve(&q, 1e-3, 10.0, 10, cap())?;
    let c = chain(4, 1e-2);
    let c_exact = exact_evolve(&c, 1e-3, 10.0, 10, cap())?;
    let (qs, qe) = wmc_slope(&q, &q_exact, 1e-2, 10.0, 1)?;
    let (cs, ce) = wmc_slope(&c, &c_exact, 1e-2, 10.0, 1)?;
    let ok = |s: f64| (-0.65..=-0.35).contains(&s);
    outcome(
        ok(qs) && ok(cs),
        format!(
            "slope qubit {qs:.3} (rms E {}), chain N=4 {cs:.3} (rms E {}); target -0.5 +- 0.15",
            sci(&qe),
            sci(&ce)
        ),
    )
}

fn sweep_spec() -> SweepSpec {
    SweepSpec {
        couplings: vec![1e-3, 1e-2, 1e-1],
        ranks: vec![1, 2, 4, 8],
        n_traj: vec![100, 500, 1000, 5000],
        t_final: 10.0,
        sample_interval: 1e-2,
        exact_dt: 1e-3,
        // both approximate solvers step on the same grid
        ert_dt: 1e-2,
        wmc_dt: 1e-2,
        seed: 7,
        channels: vec![],
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn judge_sweep(name: &str, spec: &SweepSpec, res: &SweepResult) -> (bool, String) {
    let medians: Vec<f64> = spec
        .ranks
        .iter()
        .map(|&r| {
            median(
                spec.couplings
                    .iter()
                    .map(|&c| res.select("ert", c).find(|x| x.control == r).unwrap().integrated_error)
                    .collect(),
            )
        })
        .collect();
    let monotone = medians.windows(2).all(|w| w[1] <= 1.1 * w[0]);
    let weakest = spec.couplings[0];
    let erts: Vec<_> = res.select("ert", weakest).collect();
    let dominated = res.select("wmc", weakest).all(|w| {
        erts.iter()
            .any(|e| e.integrated_error < w.integrated_error && e.wall_seconds <= w.wall_seconds)
    });
    let fmt = |solver: &str| {
        res.select(solver, weakest)
            .map(|r| format!("{}:{:.1e}/{:.2}s", r.control, r.integrated_error, r.wall_seconds))
            .collect::<Vec<_>>()
            .join(" ")
    };
    (
        monotone && dominated,
        format!(
            "{name}: median E by rank {} (monotone {monotone}); weakest coupling ert [{}] wmc [{}] (dominates {dominated})",
            sci(&medians),
            fmt("ert"),
            fmt("wmc")
        ),
    )
}

fn criterion_7() -> Result<Outcome> {
    let spec = sweep_spec();
    let chain_res = benchmark_sweep(
        &spec,
        cap(),
        |c| build_heisenberg(&SpinChainParams::unit(4, 0.0, c, 0.9), cap()),
        |_| {},
    )?;
    let cavity_res = benchmark_sweep(
        &spec,
        cap(),
        |c| build_cavity(&CavityParams::detuning_ladder(3, 6, 1.0, 0.1, 0.1, c), cap()),
        |_| {},
    )?;
    let (p1, d1) = judge_sweep("chain N=4", &spec, &chain_res);
    let (p2, d2) = judge_sweep("cavity 3 atoms", &spec, &cavity_res);
    outcome(p1 && p2, format!("{d1}; {d2}"))
}

fn criterion_8() -> Result<Outcome> {
    let m = cavity(4, 1e-3);
    let exact = exact_evolve(&m, 1e-3, 10.0, 10, cap())?;
    let ert = evolve(&m, &ErtConfig::new(1, 1e-3), 10.0, 10)?;
    let report = integrated_error_report(&exact, &ert)?;
    let per: Vec<String> = report.per_channel.iter().map(|(n, e)| format!("{n} {e:.2e}")).collect();
    outcome(
        report.value <= 5e-2 && report.excluded.is_empty(),
        format!(
            "4 atoms, N_H={}: R=1 E={:.2e} ({})",
            m.dim(),
            report.value,
            per.join(", ")
        ),
    )
}

fn criterion_9() -> Result<Outcome> {
    let m = hubbard(4, 0.03);
    let (dt, every) = (5e-3, 4);
    let exact = dipole_acceleration(&exact_evolve(&m, dt, 10.0, every, cap())?, "current")?;
    let ert = dipole_acceleration(&evolve(&m, &ErtConfig::new(64, dt), 10.0, every)?, "current")?;
    let e_dipole = integrated_error(&exact, &ert)?;

    let couplings = [0.01, 0.02, 0.04];
    let mut currents = Vec::new();
    for &g in &couplings {
        let s = evolve(&hubbard(4, g), &ErtConfig::new(64, 0.05), 200.0, 20)?;
        currents.push(steady_state_current(s.channel("current").unwrap(), 0.25)?);
    }
    let (slope, residual) = fit_through_origin(&couplings, &currents)?;
    outcome(
        e_dipole <= 2e-2 && residual <= 0.05,
        format!(
            "R=64 dipole E={e_dipole:.2e} (<= 2e-2); J_f {} at Gamma {couplings:?}, slope {slope:.3}, residual {:.2}% (<= 5%)",
            sci(&currents),
            100.0 * residual
        ),
    )
}

fn criterion_10() -> Result<Outcome> {
    let models: Vec<(&str, ModelSpec, usize)> = vec![
        ("qubit", qubit(0.2, 0.1, 1.0, QubitState::Plus), 1),
        (
            "heisenberg N=4",
            build_heisenberg(&SpinChainParams::unit(4, 0.05, 0.1, 0.9), cap())?,
            3,
        ),
        ("cavity 2 atoms", cavity(2, 0.05), 2),
        ("hubbard N=2", hubbard(2, 0.1), 3),
    ];
    let mut worst_eig: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    let mut worst_orth: f64 = 0.0;
    let mut checked = 0usize;
    for (_, m, rank) in &models {
        evolve_observed(m, &ErtConfig::new(*rank, 1e-3), 2.0, 1, |view| {
            let rho = reconstruct_density(view.ensemble);
            worst_eig = worst_eig.min(min_eigenvalue(&rho));
            worst_trace = worst_trace.max((rho.trace().re - 1.0).abs());
            if view.truncated {
                let e = view.ensemble;
                for i in 0..e.len() {
                    for j in 0..i {
                        let (u, v) = (e.member(i), e.member(j));
                        let dot: C64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
                        let norm = |x: &[C64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                        worst_orth = worst_orth.max(dot.norm() / (norm(u) * norm(v)));
                    }
                }
            }
            checked += 1;
            Ok(())
        })?;
    }

    let s = exact_evolve(&hubbard(2, 0.1), 1e-2, 20.0, 1, cap())?;
    let a = dipole_acceleration(&s, "current")?;
    let mut signals = vec![a.channels[0].clone()];
    let mut g = rng(10);
    signals.extend((0..4).map(|_| (0..a.len()).map(|_| g.random::<f64>() - 0.5).collect::<Vec<f64>>()));
    let mut worst_parseval: f64 = 0.0;
    for x in &signals {
        let energy: f64 = x.iter().map(|v| v * v).sum();
        let total = power_spectrum(&a.times, x, Window::None)?.total_power();
        worst_parseval = worst_parseval.max((total - energy).abs() / energy);
    }

    let pass = worst_eig >= -1e-10 && worst_trace <= 1e-8 && worst_orth <= 1e-8 && worst_parseval <= 1e-10;
    outcome(
        pass,
        format!(
            "{checked} sampled steps over {} models: min eigenvalue {worst_eig:.1e}, trace drift {worst_trace:.1e}, \
             orthogonality {worst_orth:.1e}; Parseval {worst_parseval:.1e}",
            models.len()
        ),
    )
}

type Criterion = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("analytic oracles", criterion_1),
        ("Kraus map order", criterion_2),
        ("untruncated equivalence", criterion_3),
        ("truncation exactness", criterion_4),
        ("low-rank weak coupling", criterion_5),
        ("WMC convergence", criterion_6),
        ("benchmark sweep", criterion_7),
        ("cavity model", criterion_8),
        ("Fermi-Hubbard", criterion_9),
        ("structural invariants", criterion_10),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        if !selected.is_empty() && !selected.contains(&number) {
            continue;
        }
        let started = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!pass);
        println!(
            "criterion {number:>2} {} {name} [{:.1}s]: {detail}",
            if pass { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
