// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants of degree 3, 5, 7, 9 or 13 (Higham 2005 selection).

use faer::linalg::solvers::Solve;
use faer::Mat;

use super::Operator;
use crate::error::{Error, Result};
use crate::C64;

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE_9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn axpy(acc: &mut Mat<C64>, alpha: f64, x: &Mat<C64>) {
    let a = C64::new(alpha, 0.0);
    for j in 0..acc.ncols() {
        for i in 0..acc.nrows() {
            acc[(i, j)] += a * x[(i, j)];
        }
    }
}

fn add_identity(acc: &mut Mat<C64>, alpha: f64) {
    for i in 0..acc.nrows() {
        acc[(i, i)] += C64::new(alpha, 0.0);
    }
}

/// Returns `(U, V)` with `U` odd and `V` even in `a`, for the low-degree
/// approximants whose powers are formed directly.
fn pade_low(a: &Mat<C64>, coeffs: &[f64]) -> (Mat<C64>, Mat<C64>) {
    let n = a.nrows();
    let a2 = a * a;
    let degree = coeffs.len() - 1;
    let mut powers = vec![Mat::<C64>::identity(n, n), a2.clone()];
    while 2 * powers.len() <= degree {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut odd = Mat::<C64>::zeros(n, n);
    let mut even = Mat::<C64>::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        if 2 * k < degree {
            axpy(&mut odd, coeffs[2 * k + 1], p);
        }
        axpy(&mut even, coeffs[2 * k], p);
    }
    (a * &odd, even)
}

fn pade_13(a: &Mat<C64>) -> (Mat<C64>, Mat<C64>) {
    let b = &PADE_13;
    let n = a.nrows();
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let mut inner_u = Mat::<C64>::zeros(n, n);
    axpy(&mut inner_u, b[13], &a6);
    axpy(&mut inner_u, b[11], &a4);
    axpy(&mut inner_u, b[9], &a2);
    let mut odd = &a6 * &inner_u;
    axpy(&mut odd, b[7], &a6);
    axpy(&mut odd, b[5], &a4);
    axpy(&mut odd, b[3], &a2);
    add_identity(&mut odd, b[1]);
    let u = a * &odd;

    let mut inner_v = Mat::<C64>::zeros(n, n);
    axpy(&mut inner_v, b[12], &a6);
    axpy(&mut inner_v, b[10], &a4);
    axpy(&mut inner_v, b[8], &a2);
    let mut v = &a6 * &inner_v;
    axpy(&mut v, b[6], &a6);
    axpy(&mut v, b[4], &a4);
    axpy(&mut v, b[2], &a2);
    add_identity(&mut v, b[0]);
    (u, v)
}

/// Matrix exponential of a square operator.
///
/// The degree and scaling are chosen from the 1-norm so that the backward
/// error of the Padé approximant is at unit roundoff.
pub fn expm(a: &Operator) -> Result<Operator> {
    if !a.is_finite() {
        return Err(Error::NonFinite { module: "linalg" });
    }
    let n = a.dim();
    if n == 0 {
        return Ok(Operator::zeros(0));
    }
    let norm = a.norm_one();
    let m = a.as_mat().to_owned();

    for &(degree, theta) in &THETA {
        if norm <= theta {
            let coeffs: &[f64] = match degree {
                3 => &PADE_3,
                5 => &PADE_5,
                7 => &PADE_7,
                _ => &PADE_9,
            };
            let (u, v) = pade_low(&m, coeffs);
            return finish(u, v, 0);
        }
    }

    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as u32
    } else {
        0
    };
    let scale = C64::new(0.5f64.powi(squarings as i32), 0.0);
    let scaled = Mat::from_fn(n, n, |i, j| m[(i, j)] * scale);
    let (u, v) = pade_13(&scaled);
    finish(u, v, squarings)
}

fn finish(u: Mat<C64>, v: Mat<C64>, squarings: u32) -> Result<Operator> {
    // r = (v - u)^{-1} (v + u)
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.partial_piv_lu().solve(&p);
    for _ in 0..squarings {
        r = &r * &r;
    }
    let out = Operator::from_mat_unchecked(r);
    if !out.is_finite() {
        return Err(Error::numerical("linalg", "matrix exponential overflowed"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Truncated Taylor series after scaling to norm <= 1/2, then squared
    /// back; independent of the Padé path.
    fn taylor_expm(a: &Operator) -> Operator {
        let squarings = (a.norm_one() / 0.5).log2().ceil().max(0.0) as i32;
        let s = a.scale_real(0.5f64.powi(squarings));
        let squarings = squarings as u32;
        let mut term = Operator::identity(a.dim());
        let mut sum = term.clone();
        for k in 1..30 {
            term = (&term * &s).scale_real(1.0 / k as f64);
            sum = &sum + &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn zero_gives_identity() {
        let e = expm(&Operator::zeros(3)).unwrap();
        assert!(e.max_abs_diff(&Operator::identity(3)) < 1e-15);
    }

    #[test]
    fn diagonal_case() {
        let a = Operator::diagonal(&[c(0.3, 0.0), c(-2.0, 1.0)]);
        let e = expm(&a).unwrap();
        assert!((e.get(0, 0) - c(0.3f64.exp(), 0.0)).norm() < 1e-14);
        assert!((e.get(1, 1) - c(-2.0, 1.0).exp()).norm() < 1e-14);
        assert!(e.get(0, 1).norm() < 1e-16);
    }

    #[test]
    fn sigma_y_rotation() {
        for &theta in &[0.01, 0.7, 3.0, 25.0] {
            let a = pauli::y().scale(c(0.0, theta));
            let e = expm(&a).unwrap();
            let expected = Operator::from_real_rows([[theta.cos(), theta.sin()], [-theta.sin(), theta.cos()]]);
            assert!(e.max_abs_diff(&expected) < 1e-12, "theta = {theta}");
        }
    }

    #[test]
    fn agrees_with_taylor_reference_across_degrees() {
        let base = Operator::from_fn(4, |i, j| {
            c(
                ((i * 3 + j * 5) % 7) as f64 / 7.0 - 0.4,
                ((i + 2 * j) % 5) as f64 / 5.0 - 0.5,
            )
        });
        for &scale in &[1e-3, 0.05, 0.4, 1.0, 2.5, 8.0] {
            let a = base.scale_real(scale);
            let e = expm(&a).unwrap();
            let r = taylor_expm(&a);
            let rel = e.max_abs_diff(&r) / r.max_abs();
            assert!(rel < 1e-12, "scale {scale}: rel err {rel:e}");
        }
    }

    #[test]
    fn rejects_non_finite() {
        let a = Operator::from_fn(2, |_, _| c(f64::INFINITY, 0.0));
        assert!(expm(&a).is_err());
    }
}
