//! Nearest-point and critical-point solvers for matrix varieties cut out by
//! orthogonally invariant conditions.
//!
//! Both families are handled the same way: move the data into the diagonal
//! slice with an orthogonal change of basis, solve there (the critical points
//! on the slice are the Weyl-group orbit of the prescribed diagonal), and move
//! the answers back.
//!
//! - Spectrum: symmetric `n×n` matrices with prescribed eigenvalues `λ` under
//!   `A ↦ gAgᵀ`. Critical points are `g·diag(λ_π)·gᵀ`, one per distinct
//!   rearrangement of `λ`.
//! - Singular values: `n×m` matrices (`n < m`) with prescribed singular values
//!   `σ` under `M ↦ UMVᵀ`. Critical points are `U·diag(±σ_π)·Vᵀ`, `2ⁿ·n!` of them.

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use thiserror::Error;

/// Relative tolerance for "point lies on the variety".
pub const ON_VARIETY_TOL: f64 = 1e-8;
/// Bound on the criticality residual of an accepted critical point.
pub const CRITICALITY_TOL: f64 = 1e-8;
/// Relative pointwise tolerance when matching critical sets.
pub const EQUIVARIANCE_TOL: f64 = 1e-7;
/// Symmetry tolerance on spectrum data, relative to its norm.
pub const SYMMETRY_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransferError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("non-generic data: {what} {i} and {j} collide ({a} vs {b})")]
    NonGeneric {
        what: &'static str,
        i: usize,
        j: usize,
        a: f64,
        b: f64,
    },
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("point is off the variety: deviation {deviation:.3e} exceeds {tol:.3e}")]
    OffVariety { deviation: f64, tol: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

type Result<T> = std::result::Result<T, TransferError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(TransferError::InvalidProblem(msg.into()))
}

fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

fn inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.dot(b)
}

/// Data matrix plus prescribed eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumProblem {
    data: DMatrix<f64>,
    lambda: Vec<f64>,
}

impl SpectrumProblem {
    pub fn new(data: DMatrix<f64>, lambda: Vec<f64>) -> Result<Self> {
        let n = data.nrows();
        if n == 0 || data.ncols() != n {
            return invalid(format!("data must be square and non-empty, got {}x{}", n, data.ncols()));
        }
        if lambda.len() != n {
            return invalid(format!("expected {n} eigenvalues, got {}", lambda.len()));
        }
        if data.iter().chain(&lambda).any(|x| !x.is_finite()) {
            return invalid("entries must be finite");
        }
        if lambda.windows(2).any(|w| w[0] > w[1]) {
            return invalid("lambda must be non-decreasing");
        }
        let asym = frobenius(&(&data - data.transpose()));
        if asym > SYMMETRY_TOL * frobenius(&data) {
            return invalid(format!("data is not symmetric (‖A − Aᵀ‖ = {asym:.3e})"));
        }
        let data = (&data + data.transpose()) * 0.5;
        Ok(SpectrumProblem { data, lambda })
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }
}

/// Data matrix plus prescribed singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularValueProblem {
    data: DMatrix<f64>,
    sigma: Vec<f64>,
}

impl SingularValueProblem {
    pub fn new(data: DMatrix<f64>, sigma: Vec<f64>) -> Result<Self> {
        let (n, m) = data.shape();
        if n == 0 || n > m {
            return invalid(format!("data must be n×m with 1 ≤ n ≤ m, got {n}x{m}"));
        }
        if sigma.len() != n {
            return invalid(format!("expected {n} singular values, got {}", sigma.len()));
        }
        if data.iter().chain(&sigma).any(|x| !x.is_finite()) {
            return invalid("entries must be finite");
        }
        if sigma.iter().any(|&s| s < 0.0) {
            return invalid("sigma must be non-negative");
        }
        if sigma.windows(2).any(|w| w[0] < w[1]) {
            return invalid("sigma must be non-increasing");
        }
        Ok(SingularValueProblem { data, sigma })
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn shape(&self) -> (usize, usize) {
        self.data.shape()
    }
}

/// Enumerated ED critical points.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalPointSet {
    pub points: Vec<DMatrix<f64>>,
    /// Diagonal of each point in the slice coordinates of the data.
    pub slice_points: Vec<Vec<f64>>,
    /// Squared Frobenius distance to the data.
    pub distances: Vec<f64>,
    pub residuals: Vec<f64>,
    pub ed_degree_expected: u128,
}

impl CriticalPointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the point closest to the data (first on ties).
    pub fn nearest_index(&self) -> usize {
        let mut best = 0;
        for (i, d) in self.distances.iter().enumerate() {
            if *d < self.distances[best] {
                best = i;
            }
        }
        best
    }
}

/// Eigenpairs sorted by ascending eigenvalue; column `i` of `vectors` belongs to `values[i]`.
struct SortedEigen {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
}

fn sorted_eigen(a: &DMatrix<f64>) -> Result<SortedEigen> {
    let eig = SymmetricEigen::try_new(a.clone(), f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| TransferError::NumericFailure("symmetric eigendecomposition did not converge".into()))?;
    let mut order: Vec<usize> = (0..a.nrows()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(a.nrows(), a.nrows(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SortedEigen { values, vectors })
}

/// Thin SVD with singular values sorted descending and signs normalized so the
/// first nonzero entry of each left singular vector is positive.
struct SortedSvd {
    u: DMatrix<f64>,
    values: Vec<f64>,
    v_t: DMatrix<f64>,
}

fn sorted_svd(m: &DMatrix<f64>) -> Result<SortedSvd> {
    let svd = SVD::try_new(m.clone(), true, true, f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| TransferError::NumericFailure("SVD did not converge".into()))?;
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(TransferError::NumericFailure("SVD returned no singular vectors".into())),
    };
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut uu = DMatrix::from_fn(u.nrows(), k, |r, c| u[(r, order[c])]);
    let mut vv = DMatrix::from_fn(k, v_t.ncols(), |r, c| v_t[(order[r], c)]);
    for c in 0..k {
        let lead = uu.column(c).iter().copied().find(|x| x.abs() > 0.0).unwrap_or(0.0);
        if lead < 0.0 {
            uu.column_mut(c).neg_mut();
            vv.row_mut(c).neg_mut();
        }
    }
    let values = order.iter().map(|&i| svd.singular_values[i]).collect();
    Ok(SortedSvd { u: uu, values, v_t: vv })
}

fn scale_of(values: &[f64]) -> f64 {
    values.iter().fold(1.0f64, |acc, x| acc.max(x.abs()))
}

/// Errors if two consecutive sorted values are within `tol·scale` of each other.
fn check_distinct(what: &'static str, sorted: &[f64], tol: f64) -> Result<()> {
    let scale = scale_of(sorted);
    for i in 1..sorted.len() {
        if (sorted[i] - sorted[i - 1]).abs() <= tol * scale {
            return Err(TransferError::NonGeneric {
                what,
                i: i - 1,
                j: i,
                a: sorted[i - 1],
                b: sorted[i],
            });
        }
    }
    Ok(())
}

fn conjugate_diag(q: &DMatrix<f64>, diag: &[f64]) -> DMatrix<f64> {
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag));
    q * d * q.transpose()
}

/// `n×m` matrix with `diag` on its main diagonal.
pub fn rectangular_diag(n: usize, m: usize, diag: &[f64]) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(n, m);
    for (i, x) in diag.iter().enumerate() {
        d[(i, i)] = *x;
    }
    d
}

/// Advances `v` to the next lexicographic permutation; false when `v` was the last.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[i] < v[j]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Distinct rearrangements of a sorted list, in lexicographic order.
pub fn distinct_rearrangements(sorted: &[f64]) -> Vec<Vec<f64>> {
    let mut classes: Vec<usize> = Vec::with_capacity(sorted.len());
    let mut values: Vec<f64> = Vec::new();
    for &x in sorted {
        if values.last() != Some(&x) {
            values.push(x);
        }
        classes.push(values.len() - 1);
    }
    let mut out = Vec::new();
    loop {
        out.push(classes.iter().map(|&c| values[c]).collect());
        if !next_permutation(&mut classes) {
            break;
        }
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

/// `n!/(n_1!⋯n_k!)` for the multiplicities of exactly-equal values in `lambda`.
pub fn ed_degree_spectrum(lambda: &[f64]) -> Result<u128> {
    if lambda.windows(2).any(|w| w[0] > w[1]) {
        return invalid("lambda must be non-decreasing");
    }
    // product of binomials C(seen, run) keeps intermediates no larger than the result
    let mut total: u128 = 1;
    let mut seen: u128 = 0;
    let mut i = 0;
    while i < lambda.len() {
        let mut j = i;
        while j < lambda.len() && lambda[j] == lambda[i] {
            j += 1;
        }
        for k in 1..=(j - i) as u128 {
            seen += 1;
            total = total
                .checked_mul(seen)
                .ok_or_else(|| TransferError::InvalidProblem("ED degree overflows u128".into()))?
                / k;
        }
        i = j;
    }
    Ok(total)
}

/// Order of the Weyl group `S_n` of `sl_n`.
pub fn ed_degree_adjoint_orbit(n: usize) -> Result<u128> {
    if n < 2 {
        return invalid(format!("adjoint orbit needs n ≥ 2, got {n}"));
    }
    factorial(n)
}

/// `2ⁿ·n!`, the order of the signed-permutation group acting on the diagonal slice.
pub fn ed_degree_singular(n: usize, m: usize) -> Result<u128> {
    if n == 0 || n >= m {
        return invalid(format!("requires 1 ≤ n < m, got n = {n}, m = {m}"));
    }
    factorial(n)?
        .checked_mul(1u128.checked_shl(n as u32).unwrap_or(0))
        .filter(|&x| x > 0)
        .ok_or_else(|| TransferError::InvalidProblem("ED degree overflows u128".into()))
}

fn factorial(n: usize) -> Result<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| {
        acc.checked_mul(k)
            .ok_or_else(|| TransferError::InvalidProblem("ED degree overflows u128".into()))
    })
}

/// Closest symmetric matrix to the data with spectrum `λ`.
pub fn nearest_with_spectrum(p: &SpectrumProblem, tol: f64) -> Result<DMatrix<f64>> {
    let eig = sorted_eigen(&p.data)?;
    // the sort is stable, so tied data eigenvalues keep a fixed order
    let b = conjugate_diag(&eig.vectors, &p.lambda);
    check_spectrum(&b, &p.lambda, tol).map_err(|e| match e {
        TransferError::OffVariety { deviation, tol } => TransferError::NumericFailure(format!(
            "reconstructed spectrum deviates by {deviation:.3e} (tolerance {tol:.3e})"
        )),
        other => other,
    })?;
    Ok(b)
}

/// All ED critical points of the isospectral variety for generic data.
pub fn critical_points_spectrum(p: &SpectrumProblem, tol: f64) -> Result<CriticalPointSet> {
    let eig = sorted_eigen(&p.data)?;
    check_distinct("data eigenvalues", &eig.values, tol)?;
    let slice_points = distinct_rearrangements(&p.lambda);
    let mut points = Vec::with_capacity(slice_points.len());
    let mut distances = Vec::with_capacity(slice_points.len());
    let mut residuals = Vec::with_capacity(slice_points.len());
    for diag in &slice_points {
        let b = conjugate_diag(&eig.vectors, diag);
        residuals.push(spectrum_residual(p, &b, tol.max(ON_VARIETY_TOL))?);
        distances.push((&p.data - &b).norm_squared());
        points.push(b);
    }
    finish(points, slice_points, distances, residuals, ed_degree_spectrum(&p.lambda)?)
}

fn finish(
    points: Vec<DMatrix<f64>>,
    slice_points: Vec<Vec<f64>>,
    distances: Vec<f64>,
    residuals: Vec<f64>,
    expected: u128,
) -> Result<CriticalPointSet> {
    if points.len() as u128 != expected {
        return Err(TransferError::NumericFailure(format!(
            "enumerated {} points, expected {expected}",
            points.len()
        )));
    }
    if let Some((i, r)) = residuals.iter().enumerate().find(|(_, r)| **r > CRITICALITY_TOL) {
        return Err(TransferError::NumericFailure(format!(
            "critical point {i} has residual {r:.3e}"
        )));
    }
    Ok(CriticalPointSet {
        points,
        slice_points,
        distances,
        residuals,
        ed_degree_expected: expected,
    })
}

fn check_spectrum(point: &DMatrix<f64>, lambda: &[f64], tol: f64) -> Result<()> {
    let n = lambda.len();
    if point.shape() != (n, n) {
        return invalid(format!("point must be {n}x{n}"));
    }
    let scale = scale_of(lambda).max(frobenius(point));
    let asym = (point - point.transpose()).amax();
    if asym > tol * scale {
        return Err(TransferError::OffVariety { deviation: asym / scale, tol });
    }
    let eig = sorted_eigen(&((point + point.transpose()) * 0.5))?;
    let dev = eig
        .values
        .iter()
        .zip(lambda)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale_of(lambda);
    if dev > tol {
        return Err(TransferError::OffVariety { deviation: dev, tol });
    }
    Ok(())
}

fn check_singular_values(point: &DMatrix<f64>, sigma: &[f64], shape: (usize, usize), tol: f64) -> Result<()> {
    if point.shape() != shape {
        return invalid(format!("point must be {}x{}", shape.0, shape.1));
    }
    let svd = sorted_svd(point)?;
    let dev = svd
        .values
        .iter()
        .zip(sigma)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / scale_of(sigma);
    if dev > tol {
        return Err(TransferError::OffVariety { deviation: dev, tol });
    }
    Ok(())
}

fn skew_basis(n: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut s = DMatrix::zeros(n, n);
            s[(i, j)] = 1.0;
            s[(j, i)] = -1.0;
            out.push(s);
        }
    }
    out
}

/// Largest normalized pairing of `data − point` with a tangent direction.
///
/// The regularizer in the denominator is `1e-6 · max(‖data‖, ‖point‖, 1) · ‖t‖`,
/// so a point that coincides with the data to rounding scores near zero.
fn tangent_residual(data: &DMatrix<f64>, point: &DMatrix<f64>, tangents: &[DMatrix<f64>]) -> f64 {
    let diff = data - point;
    let scale = frobenius(data).max(frobenius(point)).max(1.0);
    let eps = 1e-6 * scale;
    let dn = frobenius(&diff);
    tangents
        .iter()
        .map(|t| {
            let tn = frobenius(t);
            if tn == 0.0 {
                0.0
            } else {
                inner(&diff, t).abs() / (tn * (dn + eps))
            }
        })
        .fold(0.0, f64::max)
}

/// Criticality residual of `point` for the spectrum problem; errors if off the variety.
pub fn spectrum_residual(p: &SpectrumProblem, point: &DMatrix<f64>, tol: f64) -> Result<f64> {
    check_spectrum(point, &p.lambda, tol)?;
    let tangents: Vec<DMatrix<f64>> = skew_basis(p.n())
        .iter()
        .map(|s| s * point - point * s)
        .collect();
    Ok(tangent_residual(&p.data, point, &tangents))
}

/// Criticality residual of `point` for the singular-value problem; errors if off the variety.
pub fn singular_residual(p: &SingularValueProblem, point: &DMatrix<f64>, tol: f64) -> Result<f64> {
    let (n, m) = p.shape();
    check_singular_values(point, &p.sigma, (n, m), tol)?;
    let mut tangents: Vec<DMatrix<f64>> = skew_basis(n).iter().map(|s| s * point).collect();
    tangents.extend(skew_basis(m).iter().map(|t| -(point * t)));
    Ok(tangent_residual(&p.data, point, &tangents))
}

fn generic_svd(p: &SingularValueProblem, tol: f64) -> Result<SortedSvd> {
    let svd = sorted_svd(&p.data)?;
    check_distinct("data singular values", &svd.values, tol)?;
    let scale = scale_of(&svd.values);
    if let Some(i) = svd.values.iter().position(|s| *s <= tol * scale) {
        return Err(TransferError::NonGeneric {
            what: "data singular value and zero:",
            i,
            j: i,
            a: svd.values[i],
            b: 0.0,
        });
    }
    Ok(svd)
}

/// Closest matrix to the data with singular values `σ`.
pub fn nearest_with_singular_values(p: &SingularValueProblem, tol: f64) -> Result<DMatrix<f64>> {
    let svd = generic_svd(p, tol)?;
    Ok(&svd.u * DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&p.sigma)) * &svd.v_t)
}

/// All `2ⁿ·n!` ED critical points of the fixed-singular-value variety for generic data.
pub fn critical_points_singular_values(p: &SingularValueProblem, tol: f64) -> Result<CriticalPointSet> {
    let (n, m) = p.shape();
    if n == m {
        return Err(TransferError::Unsupported("square case parity".into()));
    }
    check_distinct("prescribed singular values", &{
        let mut s = p.sigma.clone();
        s.reverse();
        s
    }, tol)?;
    if let Some(i) = p.sigma.iter().position(|&s| s <= tol * scale_of(&p.sigma)) {
        return Err(TransferError::NonGeneric {
            what: "prescribed singular value and zero:",
            i,
            j: i,
            a: p.sigma[i],
            b: 0.0,
        });
    }
    let svd = generic_svd(p, tol)?;
    let mut slice_points = Vec::new();
    for perm in permutations(n) {
        for mask in 0..(1u32 << n) {
            slice_points.push(
                perm.iter()
                    .enumerate()
                    .map(|(i, &k)| if mask >> i & 1 == 1 { -p.sigma[k] } else { p.sigma[k] })
                    .collect::<Vec<f64>>(),
            );
        }
    }
    let mut points = Vec::with_capacity(slice_points.len());
    let mut distances = Vec::with_capacity(slice_points.len());
    let mut residuals = Vec::with_capacity(slice_points.len());
    for diag in &slice_points {
        let b = &svd.u * DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag)) * &svd.v_t;
        residuals.push(singular_residual(p, &b, tol.max(ON_VARIETY_TOL))?);
        distances.push((&p.data - &b).norm_squared());
        points.push(b);
    }
    finish(points, slice_points, distances, residuals, ed_degree_singular(n, m)?)
}

/// A problem of either family.
#[derive(Debug, Clone, PartialEq)]
pub enum Problem {
    Spectrum(SpectrumProblem),
    Singular(SingularValueProblem),
}

/// A group element acting on the data: `g` for spectrum problems, `(U, V)` for
/// singular-value problems.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    Orthogonal(DMatrix<f64>),
    Pair(DMatrix<f64>, DMatrix<f64>),
}

fn check_orthogonal(g: &DMatrix<f64>, n: usize, tol: f64) -> Result<()> {
    if g.shape() != (n, n) {
        return invalid(format!("group element must be {n}x{n}"));
    }
    let err = (g.transpose() * g - DMatrix::<f64>::identity(n, n)).amax();
    if err > tol {
        return invalid(format!("group element is not orthogonal (‖gᵀg − I‖ = {err:.3e})"));
    }
    Ok(())
}

impl Problem {
    pub fn data(&self) -> &DMatrix<f64> {
        match self {
            Problem::Spectrum(p) => &p.data,
            Problem::Singular(p) => &p.data,
        }
    }

    pub fn critical_points(&self, tol: f64) -> Result<CriticalPointSet> {
        match self {
            Problem::Spectrum(p) => critical_points_spectrum(p, tol),
            Problem::Singular(p) => critical_points_singular_values(p, tol),
        }
    }

    pub fn nearest(&self, tol: f64) -> Result<DMatrix<f64>> {
        match self {
            Problem::Spectrum(p) => nearest_with_spectrum(p, tol),
            Problem::Singular(p) => nearest_with_singular_values(p, tol),
        }
    }

    /// Criticality residual of `point`; errors when `point` is off the variety.
    pub fn verify_criticality(&self, point: &DMatrix<f64>, tol: f64) -> Result<f64> {
        match self {
            Problem::Spectrum(p) => spectrum_residual(p, point, tol),
            Problem::Singular(p) => singular_residual(p, point, tol),
        }
    }

    /// Applies a group element to a point of the ambient space.
    pub fn act(&self, g: &GroupElement, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        match (self, g) {
            (Problem::Spectrum(_), GroupElement::Orthogonal(g)) => Ok(g * x * g.transpose()),
            (Problem::Singular(_), GroupElement::Pair(u, v)) => Ok(u * x * v.transpose()),
            _ => invalid("group element does not match the problem family"),
        }
    }

    fn check_group_element(&self, g: &GroupElement, tol: f64) -> Result<()> {
        match (self, g) {
            (Problem::Spectrum(p), GroupElement::Orthogonal(g)) => check_orthogonal(g, p.n(), tol),
            (Problem::Singular(p), GroupElement::Pair(u, v)) => {
                let (n, m) = p.shape();
                check_orthogonal(u, n, tol)?;
                check_orthogonal(v, m, tol)
            }
            _ => invalid("group element does not match the problem family"),
        }
    }

    /// The same problem with the data moved by `g`.
    pub fn moved(&self, g: &GroupElement) -> Result<Problem> {
        let data = self.act(g, self.data())?;
        match self {
            Problem::Spectrum(p) => Ok(Problem::Spectrum(SpectrumProblem::new(data, p.lambda.clone())?)),
            Problem::Singular(p) => Ok(Problem::Singular(SingularValueProblem::new(data, p.sigma.clone())?)),
        }
    }

    /// Whether the critical set for `g·data` is `g` applied to the critical set for `data`.
    pub fn equivariance_check(&self, g: &GroupElement, tol: f64) -> Result<bool> {
        self.check_group_element(g, tol)?;
        let before = self.critical_points(ON_VARIETY_TOL)?;
        let after = self.moved(g)?.critical_points(ON_VARIETY_TOL)?;
        let moved: Vec<DMatrix<f64>> = before
            .points
            .iter()
            .map(|x| self.act(g, x))
            .collect::<Result<_>>()?;
        let scale = frobenius(self.data()).max(1.0);
        Ok(sets_match(&moved, &after.points, tol * scale))
    }

    /// Whether every critical point for diagonal data is itself diagonal.
    pub fn slice_containment_check(&self, tol: f64) -> Result<bool> {
        let data = self.data();
        let scale = frobenius(data).max(1.0);
        if off_diagonal_max(data) > tol * scale {
            return invalid("data does not lie in the diagonal slice");
        }
        let set = self.critical_points(ON_VARIETY_TOL)?;
        Ok(set
            .points
            .iter()
            .all(|x| off_diagonal_max(x) <= tol * frobenius(x).max(f64::MIN_POSITIVE)))
    }
}

fn off_diagonal_max(x: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..x.nrows() {
        for j in (0..x.ncols()).filter(|&j| j != i) {
            worst = worst.max(x[(i, j)].abs());
        }
    }
    worst
}

/// Greedy nearest matching; true iff it pairs every point within `tol`.
pub fn sets_match(a: &[DMatrix<f64>], b: &[DMatrix<f64>], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, frobenius(&(x - y))))
            .min_by(|p, q| p.1.total_cmp(&q.1));
        match best {
            Some((j, d)) if d <= tol => used[j] = true,
            _ => return false,
        }
    }
    true
}
