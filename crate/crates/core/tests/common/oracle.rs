//! Independent critical-point solver for the fixed-singular-value variety.
//!
//! Points are parametrized directly by rotation angles, and critical points are
//! found as zeros of the Lagrange conditions: `B` is critical for the squared
//! distance to `M` exactly when `M·Bᵀ` and `Bᵀ·M` are symmetric. Every point of a
//! coarse angle grid seeds a damped Gauss-Newton (Levenberg-Marquardt) solve,
//! and converged points are deduplicated.

use nalgebra::{DMatrix, DVector};
use std::f64::consts::PI;

/// Strict upper triangles of `M·Bᵀ − B·Mᵀ` and `Bᵀ·M − Mᵀ·B`.
pub fn lagrange_residual(m: &DMatrix<f64>, b: &DMatrix<f64>) -> DVector<f64> {
    let left = m * b.transpose() - b * m.transpose();
    let right = b.transpose() * m - m.transpose() * b;
    let mut out = Vec::new();
    for x in [&left, &right] {
        for i in 0..x.nrows() {
            for j in i + 1..x.ncols() {
                out.push(x[(i, j)]);
            }
        }
    }
    DVector::from_vec(out)
}

fn rot2(t: f64) -> DMatrix<f64> {
    let (s, c) = t.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

fn rot_z(t: f64) -> DMatrix<f64> {
    let (s, c) = t.sin_cos();
    DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0])
}

fn rot_y(t: f64) -> DMatrix<f64> {
    let (s, c) = t.sin_cos();
    DMatrix::from_row_slice(3, 3, &[c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c])
}

/// The variety point with singular values `sigma` at parameters `x`.
///
/// `1×2`: `σ·(cos θ, sin θ)`. `2×3`: `R(θ)·diag(σ)·V₂ᵀ` with `V₂` the first two
/// columns of the ZYZ rotation `Rz(α)·Ry(β)·Rz(γ)`. Reflections in the left factor
/// are absorbed into the frame `V₂`, so both maps are onto.
pub fn point(shape: (usize, usize), sigma: &[f64], x: &[f64]) -> DMatrix<f64> {
    match shape {
        (1, 2) => DMatrix::from_row_slice(1, 2, &[sigma[0] * x[0].cos(), sigma[0] * x[0].sin()]),
        (2, 3) => {
            let v = rot_z(x[1]) * rot_y(x[2]) * rot_z(x[3]);
            let frame = v.columns(0, 2).into_owned();
            let s = DMatrix::from_row_slice(2, 2, &[sigma[0], 0.0, 0.0, sigma[1]]);
            rot2(x[0]) * s * frame.transpose()
        }
        other => panic!("oracle does not cover shape {other:?}"),
    }
}

fn param_grid(shape: (usize, usize)) -> Vec<Vec<f64>> {
    match shape {
        (1, 2) => (0..64).map(|k| vec![2.0 * PI * k as f64 / 64.0]).collect(),
        (2, 3) => {
            let k = 6;
            let full = |i: usize| 2.0 * PI * (i as f64 + 0.5) / k as f64;
            let half = |i: usize| PI * (i as f64 + 0.5) / k as f64;
            let mut out = Vec::new();
            for a in 0..k {
                for b in 0..k {
                    for c in 0..k {
                        for d in 0..k {
                            out.push(vec![full(a), full(b), half(c), full(d)]);
                        }
                    }
                }
            }
            out
        }
        other => panic!("oracle does not cover shape {other:?}"),
    }
}

fn levenberg_marquardt(f: impl Fn(&[f64]) -> DVector<f64>, x0: &[f64]) -> (Vec<f64>, f64) {
    let mut x = x0.to_vec();
    let mut r = f(&x);
    let mut lambda = 1e-3;
    for _ in 0..200 {
        if r.norm() < 1e-14 {
            break;
        }
        let h = 1e-7;
        let mut jac = DMatrix::zeros(r.len(), x.len());
        for k in 0..x.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            jac.set_column(k, &((f(&xp) - f(&xm)) / (2.0 * h)));
        }
        let jt = jac.transpose();
        let normal = &jt * &jac;
        let grad = &jt * &r;
        let mut improved = false;
        for _ in 0..30 {
            let mut a = normal.clone();
            for i in 0..x.len() {
                a[(i, i)] += lambda * (1.0 + normal[(i, i)]);
            }
            let Some(step) = a.lu().solve(&(-&grad)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rt = f(&trial);
            if rt.norm() < r.norm() {
                x = trial;
                r = rt;
                lambda = (lambda / 3.0).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    let norm = r.norm();
    (x, norm)
}

/// All critical points found from the grid, deduplicated at `1e-6`.
pub fn critical_points(m: &DMatrix<f64>, sigma: &[f64]) -> Vec<DMatrix<f64>> {
    let shape = m.shape();
    let scale = m.norm() * sigma.iter().map(|s| s.abs()).fold(1.0, f64::max);
    let f = |x: &[f64]| lagrange_residual(m, &point(shape, sigma, x)) / scale;
    let mut found: Vec<DMatrix<f64>> = Vec::new();
    for x0 in param_grid(shape) {
        let (x, res) = levenberg_marquardt(f, &x0);
        if res > 1e-11 {
            continue;
        }
        let b = point(shape, sigma, &x);
        if found.iter().all(|y| (y - &b).norm() > 1e-6) {
            found.push(b);
        }
    }
    found
}
