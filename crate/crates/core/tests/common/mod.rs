#![allow(dead_code)]

pub mod oracle;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn diag(xs: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(xs))
}

/// Random orthogonal matrix from the QR factorization of a uniform matrix.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    a.qr().q()
}

/// Strictly increasing list whose consecutive gaps are at least `gap`.
pub fn sorted_with_gaps(rng: &mut ChaCha8Rng, n: usize, gap: f64) -> Vec<f64> {
    let mut x = rng.random_range(-2.0..2.0);
    (0..n)
        .map(|_| {
            let v = x;
            x += gap + rng.random_range(0.0..1.0);
            v
        })
        .collect()
}

/// Symmetric matrix with eigenvalues `mu` in a random orthonormal basis.
pub fn symmetric_with_spectrum(rng: &mut ChaCha8Rng, mu: &[f64]) -> DMatrix<f64> {
    let q = random_orthogonal(rng, mu.len());
    let a = &q * diag(mu) * q.transpose();
    (&a + a.transpose()) * 0.5
}

/// `n×m` matrix with singular values `s` in random orthonormal bases.
pub fn matrix_with_singular_values(rng: &mut ChaCha8Rng, n: usize, m: usize, s: &[f64]) -> DMatrix<f64> {
    let u = random_orthogonal(rng, n);
    let v = random_orthogonal(rng, m);
    let mut d = DMatrix::zeros(n, m);
    for (i, x) in s.iter().enumerate() {
        d[(i, i)] = *x;
    }
    u * d * v.transpose()
}

/// Positive, strictly decreasing values with gaps of at least `gap`.
pub fn decreasing_positive(rng: &mut ChaCha8Rng, n: usize, gap: f64) -> Vec<f64> {
    let mut x = rng.random_range(0.3..1.0);
    let mut out: Vec<f64> = (0..n)
        .map(|_| {
            let v = x;
            x += gap + rng.random_range(0.0..1.0);
            v
        })
        .collect();
    out.reverse();
    out
}
