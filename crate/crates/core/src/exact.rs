//! Exact dense linear algebra over the rationals.
//!
//! Every routine here is exact. Rank uses fraction-free (Bareiss) elimination
//! on integer-scaled rows; nullspaces and span membership use Gauss-Jordan
//! elimination with reduced fractions, whose entries stay bounded by ratios of
//! minors of the input.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// An exact vector is a plain list of rationals.
pub type ExactVector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("invalid rational {text:?}: {reason}")]
    ParseRational { text: String, reason: &'static str },
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `[+-]digits[/digits]`.
pub fn parse_rational(text: &str) -> Result<Rational, LinalgError> {
    let err = |reason| LinalgError::ParseRational {
        text: text.to_string(),
        reason,
    };
    let (sign, body) = match text.as_bytes().first() {
        Some(b'-') => (-1, &text[1..]),
        Some(b'+') => (1, &text[1..]),
        _ => (1, text),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) {
        return Err(err("numerator must be a non-empty run of digits"));
    }
    let numer = BigInt::from_str(num).map_err(|_| err("numerator out of range"))? * sign;
    let denom = match den {
        Some(d) if !digits(d) => return Err(err("denominator must be a non-empty run of digits")),
        Some(d) => BigInt::from_str(d).map_err(|_| err("denominator out of range"))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// Formats as `p/q`, or `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != ncols) {
            return Err(LinalgError::Shape(format!(
                "row {i} has {} entries, expected {ncols}",
                rows[i].len()
            )));
        }
        Ok(ExactMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Self::from_rows(rows).expect("ragged integer rows")
    }

    /// Builds a matrix whose columns are the given vectors (all of length `len`).
    pub fn from_columns(len: usize, columns: &[ExactVector]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(len, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != len {
                return Err(LinalgError::Shape(format!(
                    "column {j} has length {}, expected {len}",
                    c.len()
                )));
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ExactVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<ExactVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<ExactVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// First `(i, j)` with `m[i][j] != m[j][i]`, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> ExactVector {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    /// Bilinear form `xᵀ M y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        dot(x, &self.mul_vec(y))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        ExactMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

pub fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter()
        .zip(y)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Scales a rational row by the lcm of its denominators, giving an integer row
/// with the same span.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect()
}

/// Exact rank by fraction-free elimination.
pub fn rank(m: &ExactMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| integer_row(m.row(i))).collect();
    bareiss_rank(&mut a, m.cols())
}

fn bareiss_rank(a: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Smallest nonzero pivot keeps the products short.
        let Some(p) = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| a[i][c].bits())
        else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form together with pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

pub fn rref(m: &ExactMatrix) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..cols {
            if !a[(r, j)].is_zero() {
                a[(r, j)] = &a[(r, j)] * &inv;
            }
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                if !a[(r, j)].is_zero() {
                    let d = &f * &a[(r, j)];
                    a[(i, j)] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, pivots }
}

/// Basis of `{x : M x = 0}`, returned as the columns of a `cols(M) × k` matrix.
pub fn nullspace_basis(m: &ExactMatrix) -> ExactMatrix {
    let Rref { matrix: r, pivots } = rref(m);
    let n = m.cols();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = ExactMatrix::zeros(n, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[(f, k)] = Rational::one();
        for (row, &p) in pivots.iter().enumerate() {
            basis[(p, k)] = -&r[(row, f)];
        }
    }
    basis
}

/// Indices of a maximal linearly independent subset, chosen greedily in order.
pub fn independent_subset(len: usize, vectors: &[ExactVector]) -> Result<Vec<usize>, LinalgError> {
    let m = ExactMatrix::from_columns(len, vectors)?;
    Ok(rref(&m).pivots)
}

/// Outcome of a span-membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanMembership {
    pub member: bool,
    /// Coefficients reproducing the target, one per spanner, when `member`.
    pub coeffs: Option<ExactVector>,
}

/// Decides whether `target` lies in the span of `spanners`.
pub fn in_span(target: &[Rational], spanners: &[ExactVector]) -> Result<SpanMembership, LinalgError> {
    let len = target.len();
    let mut cols = spanners.to_vec();
    cols.push(target.to_vec());
    let aug = ExactMatrix::from_columns(len, &cols)?;
    let Rref { matrix: r, pivots } = rref(&aug);
    let k = spanners.len();
    if pivots.last() == Some(&k) {
        return Ok(SpanMembership {
            member: false,
            coeffs: None,
        });
    }
    let mut coeffs = vec![Rational::zero(); k];
    for (row, &p) in pivots.iter().enumerate() {
        coeffs[p] = r[(row, k)].clone();
    }
    Ok(SpanMembership {
        member: true,
        coeffs: Some(coeffs),
    })
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &ExactMatrix) -> Result<Rational, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::Shape(format!(
            "determinant of non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            scale *= &lcm;
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect();
    let mut prev = BigInt::one();
    let mut sign = 1;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        let (top, rest) = a.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..n {
                let v = &pivot_row[c] * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
    }
    Ok(Rational::new(&a[n - 1][n - 1] * sign, scale))
}

/// Whether the form with matrix `gram`, restricted to the span of `subspace`,
/// is non-degenerate. An empty span counts as non-degenerate.
pub fn restricted_form_nondegenerate(
    gram: &ExactMatrix,
    subspace: &[ExactVector],
) -> Result<bool, LinalgError> {
    if let Some((row, col)) = gram.asymmetry() {
        if !gram.is_square() {
            return Err(LinalgError::Shape("gram matrix is not square".into()));
        }
        return Err(LinalgError::NotSymmetric { row, col });
    }
    let n = gram.rows();
    let keep = independent_subset(n, subspace)?;
    if keep.is_empty() {
        return Ok(true);
    }
    let chosen: Vec<ExactVector> = keep.iter().map(|&i| subspace[i].clone()).collect();
    let s = ExactMatrix::from_columns(n, &chosen)?;
    let restricted = &(&s.transpose() * gram) * &s;
    Ok(rank(&restricted) == chosen.len())
}

/// Multiplies every entry of `v` by `c`.
pub fn scale_vector(v: &[Rational], c: &Rational) -> ExactVector {
    v.iter().map(|x| x * c).collect()
}

/// Row-reduced basis of the span of `vectors`, for comparing subspaces.
pub fn canonical_span(len: usize, vectors: &[ExactVector]) -> Result<ExactMatrix, LinalgError> {
    let m = ExactMatrix::from_rows(if vectors.is_empty() {
        Vec::new()
    } else {
        vectors.to_vec()
    })?;
    if m.rows() > 0 && m.cols() != len {
        return Err(LinalgError::Shape(format!(
            "vectors have length {}, expected {len}",
            m.cols()
        )));
    }
    let r = rref(&m);
    let rows = r.pivots.len();
    let kept = (0..rows).map(|i| r.matrix.row(i).to_vec()).collect();
    ExactMatrix::from_rows(kept)
}

pub fn abs_max(v: &[Rational]) -> Rational {
    v.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> ExactVector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ExactMatrix::identity(3)), 3);
        assert_eq!(rank(&ExactMatrix::zeros(2, 2)), 0);
        assert_eq!(rank(&ExactMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(rank(&ExactMatrix::zeros(0, 4)), 0);
    }

    #[test]
    fn rank_with_fractions_and_skipped_columns() {
        let m = ExactMatrix::from_rows(vec![
            vec![rat(0), ratio(1, 2), rat(1)],
            vec![rat(0), rat(1), rat(2)],
            vec![rat(0), rat(0), ratio(1, 3)],
        ])
        .unwrap();
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(nullspace_basis(&ExactMatrix::identity(3)).cols(), 0);
        let zero = nullspace_basis(&ExactMatrix::zeros(2, 2));
        assert_eq!(zero.cols(), 2);
        assert_eq!(rank(&zero), 2);
        let k = nullspace_basis(&ExactMatrix::from_i64_rows(&[&[1, 1]]));
        assert_eq!(k.cols(), 1);
        // direct solve: x + y = 0 means (x, y) is a multiple of (1, -1)
        assert_eq!(&k[(0, 0)] + &k[(1, 0)], rat(0));
        assert!(!k[(0, 0)].is_zero());
    }

    #[test]
    fn in_span_examples() {
        let yes = in_span(&v(&[1, 1]), &[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert!(yes.member);
        assert_eq!(yes.coeffs, Some(v(&[1, 1])));
        let no = in_span(&v(&[1, 0]), &[v(&[0, 1])]).unwrap();
        assert!(!no.member);
        assert_eq!(no.coeffs, None);
        // empty spanning set spans only zero
        assert!(in_span(&v(&[0, 0]), &[]).unwrap().member);
        assert!(!in_span(&v(&[0, 1]), &[]).unwrap().member);
    }

    #[test]
    fn in_span_rejects_ragged_input() {
        assert!(in_span(&v(&[1, 0]), &[v(&[1, 0, 0])]).is_err());
    }

    #[test]
    fn restricted_form_examples() {
        let id = ExactMatrix::identity(3);
        assert!(restricted_form_nondegenerate(&id, &[v(&[1, 2, 0]), v(&[0, 1, 5])]).unwrap());
        let hyperbolic = ExactMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert!(!restricted_form_nondegenerate(&hyperbolic, &[v(&[1, 0])]).unwrap());
        assert!(restricted_form_nondegenerate(&hyperbolic, &[v(&[1, 1])]).unwrap());
        let skew = ExactMatrix::from_i64_rows(&[&[0, 1], &[-1, 0]]);
        assert!(matches!(
            restricted_form_nondegenerate(&skew, &[v(&[1, 0])]),
            Err(LinalgError::NotSymmetric { row: 0, col: 1 })
        ));
    }

    #[test]
    fn restricted_form_quartic_gram() {
        // anti-diagonal (12, -3, 2, -3, 12) in the basis x^4, x^3y, x^2y^2, xy^3, y^4
        let mut g = ExactMatrix::zeros(5, 5);
        for (i, x) in [12, -3, 2, -3, 12].into_iter().enumerate() {
            g[(i, 4 - i)] = rat(x);
        }
        // on span(x^4 + y^4, x^2y^2) the restricted matrix is diag(24, 2)
        assert!(restricted_form_nondegenerate(&g, &[v(&[1, 0, 0, 0, 1]), v(&[0, 0, 1, 0, 0])]).unwrap());
        assert!(!restricted_form_nondegenerate(&g, &[v(&[1, 0, 0, 0, 0])]).unwrap());
    }

    #[test]
    fn determinant_matches_hand_values() {
        let m = ExactMatrix::from_i64_rows(&[&[2, 1], &[7, 4]]);
        assert_eq!(determinant(&m).unwrap(), rat(1));
        let p = ExactMatrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]);
        assert_eq!(determinant(&p).unwrap(), rat(-3));
        let h = ExactMatrix::from_rows(vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(1, 3), ratio(1, 4)]]).unwrap();
        assert_eq!(determinant(&h).unwrap(), ratio(1, 72));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("-3/4").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("+6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational("12").unwrap(), rat(12));
        for bad in ["", "1/", "/2", "1/0", "3/-4", "1.5", "--1", " 1"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should be rejected");
        }
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(7)), "7");
    }
}
