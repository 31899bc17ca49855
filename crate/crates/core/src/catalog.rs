//! Constructors for the polar families, the binary-quartic example and a
//! non-polar control.
//!
//! Basis conventions (all fixed; slices and Gram matrices refer to them):
//! - full matrix spaces use row-major matrix units `E_ij`;
//! - symmetric matrices use `E_ii` / `E_ij + E_ji` for `i ≤ j`, row-major;
//! - skew matrices and `Λ²` use `E_ij − E_ji` (= `e_i ∧ e_j`) for `i < j`, lexicographic;
//! - traceless spaces (`sl_n`, traceless symmetric) put off-diagonal units in
//!   row-major order around the diagonal differences `E_kk − E_(k+1)(k+1)`:
//!   `sl_n` lists strictly upper units, then the differences, then strictly
//!   lower units (so `sl_2` is `e, h, f`); traceless symmetric lists the
//!   differences first, then `E_ij + E_ji`;
//! - pairs `(A, B)` and direct sums concatenate the coordinates of `A` then `B`;
//! - binary quartics use `x⁴, x³y, x²y², xy³, y⁴`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::exact::{rat, ExactMatrix, ExactVector, Rational};
use crate::rep::{validate, OrthogonalRep, SliceBasis};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error("{family} takes {expected} parameter(s), got {got}")]
    Arity {
        family: FamilyId,
        expected: usize,
        got: usize,
    },
    #[error("{family}: parameter {name} = {value} is below the minimum {min}")]
    BelowMinimum {
        family: FamilyId,
        name: &'static str,
        value: usize,
        min: usize,
    },
    #[error("{family}: requires n <= m, got n = {n}, m = {m}")]
    NExceedsM { family: FamilyId, n: usize, m: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    AdjointSln,
    SoStandard,
    SoSymTraceless,
    OnomMatrix,
    SpLambda2,
    SpnSpmTensor,
    SlnStdDual,
    GlnSymPairs,
    GlnSkewPairs,
    SpnStdDual,
    GlnGlmTensorPairs,
    Sl2Quartics,
    So2DoubleStandard,
}

impl FamilyId {
    pub const ALL: [FamilyId; 13] = [
        FamilyId::AdjointSln,
        FamilyId::SoStandard,
        FamilyId::SoSymTraceless,
        FamilyId::OnomMatrix,
        FamilyId::SpLambda2,
        FamilyId::SpnSpmTensor,
        FamilyId::SlnStdDual,
        FamilyId::GlnSymPairs,
        FamilyId::GlnSkewPairs,
        FamilyId::SpnStdDual,
        FamilyId::GlnGlmTensorPairs,
        FamilyId::Sl2Quartics,
        FamilyId::So2DoubleStandard,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyId::AdjointSln => "adjoint-sln",
            FamilyId::SoStandard => "so-standard",
            FamilyId::SoSymTraceless => "so-sym-traceless",
            FamilyId::OnomMatrix => "onom-matrix",
            FamilyId::SpLambda2 => "sp-lambda2",
            FamilyId::SpnSpmTensor => "spn-spm-tensor",
            FamilyId::SlnStdDual => "sln-std-dual",
            FamilyId::GlnSymPairs => "gln-sym-pairs",
            FamilyId::GlnSkewPairs => "gln-skew-pairs",
            FamilyId::SpnStdDual => "spn-std-dual",
            FamilyId::GlnGlmTensorPairs => "gln-glm-tensor-pairs",
            FamilyId::Sl2Quartics => "sl2-quartics",
            FamilyId::So2DoubleStandard => "so2-double-standard",
        }
    }

    pub fn template(self) -> FamilyTemplate {
        catalog_list()
            .into_iter()
            .find(|t| t.family == self)
            .expect("every family has a template")
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyId {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| CatalogError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamRange {
    pub name: &'static str,
    pub min: usize,
}

/// Documentation record for one family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyTemplate {
    pub family: FamilyId,
    pub params: Vec<ParamRange>,
    /// Whether the family requires `n <= m`.
    pub n_le_m: bool,
    /// Whether the family is expected to be polar.
    pub polar: bool,
    pub group: &'static str,
    pub space: &'static str,
    pub form: &'static str,
    pub slice: &'static str,
}

/// A family together with its integer parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: FamilyId,
    pub params: Vec<usize>,
}

impl FamilySpec {
    pub fn new(family: FamilyId, params: &[usize]) -> Self {
        FamilySpec {
            family,
            params: params.to_vec(),
        }
    }

    pub fn check(&self) -> Result<(), CatalogError> {
        let t = self.family.template();
        if self.params.len() != t.params.len() {
            return Err(CatalogError::Arity {
                family: self.family,
                expected: t.params.len(),
                got: self.params.len(),
            });
        }
        for (range, &value) in t.params.iter().zip(&self.params) {
            if value < range.min {
                return Err(CatalogError::BelowMinimum {
                    family: self.family,
                    name: range.name,
                    value,
                    min: range.min,
                });
            }
        }
        if t.n_le_m && self.params[0] > self.params[1] {
            return Err(CatalogError::NExceedsM {
                family: self.family,
                n: self.params[0],
                m: self.params[1],
            });
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        if self.params.is_empty() {
            self.family.to_string()
        } else {
            let p: Vec<String> = self.params.iter().map(usize::to_string).collect();
            format!("{}({})", self.family, p.join(","))
        }
    }
}

pub fn catalog_list() -> Vec<FamilyTemplate> {
    let n = |min| vec![ParamRange { name: "n", min }];
    let nm = |min_n, min_m| {
        vec![
            ParamRange { name: "n", min: min_n },
            ParamRange { name: "m", min: min_m },
        ]
    };
    let t = |family, params, n_le_m, polar, group, space, form, slice| FamilyTemplate {
        family,
        params,
        n_le_m,
        polar,
        group,
        space,
        form,
        slice,
    };
    vec![
        t(FamilyId::AdjointSln, n(2), false, true,
          "SL(n) by conjugation", "sl(n), traceless n×n matrices",
          "Killing form Tr(ad v ad w) = 2n Tr(vw)", "Cartan subalgebra of diagonal matrices"),
        t(FamilyId::SoStandard, n(2), false, true,
          "O(n)", "C^n", "standard dot product", "span(e1)"),
        t(FamilyId::SoSymTraceless, n(2), false, true,
          "SO(n) by conjugation", "traceless symmetric n×n matrices",
          "Tr(AᵀB)", "diagonal matrices"),
        t(FamilyId::OnomMatrix, nm(1, 1), true, true,
          "O(n)×O(m), A ↦ gAhᵀ", "n×m matrices", "Tr(AᵀB)", "diagonal matrix units E_ii"),
        t(FamilyId::SpLambda2, n(1), false, true,
          "Sp(n)", "Λ²C^{2n}", "⟨v∧w|x∧y⟩ = Ω(v,x)Ω(w,y) − Ω(v,y)Ω(w,x)",
          "span(e_i ∧ e_{n+i})"),
        t(FamilyId::SpnSpmTensor, nm(1, 1), true, true,
          "Sp(n)×Sp(m), A ↦ gAhᵀ", "2n×2m matrices", "Tr(J_n A J_m Bᵀ)",
          "E_ii + E_{n+i,m+i}"),
        t(FamilyId::SlnStdDual, n(2), false, true,
          "SL(n), (v,w) ↦ (gv, g⁻ᵀw)", "C^n ⊕ C^n", "vᵀy + xᵀw", "span((e1, e1))"),
        t(FamilyId::GlnSymPairs, n(1), false, true,
          "GL(n), (A,B) ↦ (gAgᵀ, g⁻ᵀBg⁻¹)", "pairs of symmetric n×n matrices",
          "Tr(AD + BC)", "(E_ii, E_ii)"),
        t(FamilyId::GlnSkewPairs, n(2), false, true,
          "GL(n), (A,B) ↦ (gAgᵀ, g⁻ᵀBg⁻¹)", "pairs of skew n×n matrices",
          "Tr(AD + BC)", "(e_i∧e_{h+i}, e_i∧e_{h+i}), h = n/2 (even) or (n+1)/2 (odd)"),
        t(FamilyId::SpnStdDual, n(1), false, true,
          "Sp(n), diagonal on both summands", "C^{2n} ⊕ C^{2n}", "vᵀJy + xᵀJw",
          "span((v, w)) with v_i = 1, w_i = i"),
        t(FamilyId::GlnGlmTensorPairs, nm(1, 1), true, true,
          "GL(n)×GL(m), (A,B) ↦ (gAhᵀ, g⁻ᵀBh⁻¹)", "pairs of n×m matrices",
          "Tr(AᵀD + CᵀB)", "(E_ii, E_ii)"),
        t(FamilyId::Sl2Quartics, vec![], false, true,
          "SL(2)", "binary quartics",
          "anti-diagonal (12, −3, 2, −3, 12)", "span(x⁴ + y⁴, x²y²)"),
        t(FamilyId::So2DoubleStandard, vec![], false, false,
          "SO(2) acting diagonally", "C² ⊕ C²", "standard dot product",
          "none (negative control)"),
    ]
}

/// A built representation and its claimed slice (absent for non-polar controls).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub spec: FamilySpec,
    pub rep: OrthogonalRep,
    pub slice: Option<SliceBasis>,
}

/// Builds the representation for a family, validating it before returning.
pub fn catalog_build(spec: &FamilySpec) -> Result<CatalogEntry, CatalogError> {
    spec.check()?;
    let p = &spec.params;
    let (model, slice) = match spec.family {
        FamilyId::AdjointSln => adjoint_sln(p[0]),
        FamilyId::SoStandard => so_standard(p[0]),
        FamilyId::SoSymTraceless => so_sym_traceless(p[0]),
        FamilyId::OnomMatrix => onom_matrix(p[0], p[1]),
        FamilyId::SpLambda2 => sp_lambda2(p[0]),
        FamilyId::SpnSpmTensor => spn_spm_tensor(p[0], p[1]),
        FamilyId::SlnStdDual => sln_std_dual(p[0]),
        FamilyId::GlnSymPairs => gl_pairs(p[0], PairKind::Symmetric),
        FamilyId::GlnSkewPairs => gl_pairs(p[0], PairKind::Skew),
        FamilyId::SpnStdDual => spn_std_dual(p[0]),
        FamilyId::GlnGlmTensorPairs => gln_glm_tensor_pairs(p[0], p[1]),
        FamilyId::Sl2Quartics => sl2_quartics(),
        FamilyId::So2DoubleStandard => so2_double_standard(),
    };
    let t = spec.family.template();
    let mut meta = json!({
        "family": spec.family.as_str(),
        "group": t.group,
        "space": t.space,
        "form": t.form,
    });
    for (range, value) in t.params.iter().zip(p) {
        meta[range.name] = json!(value);
    }
    let rep = OrthogonalRep {
        name: spec.label(),
        dim: model.gram.rows(),
        gram: model.gram,
        generators: model.generators,
        metadata: meta,
    };
    validate(&rep).unwrap_or_else(|e| panic!("catalog entry {} is invalid: {e}", spec.label()));
    let slice = slice.map(SliceBasis::claimed);
    if let Some(s) = &slice {
        s.check(rep.dim)
            .unwrap_or_else(|e| panic!("catalog slice for {} is invalid: {e}", spec.label()));
    }
    Ok(CatalogEntry {
        spec: spec.clone(),
        rep,
        slice,
    })
}

/// The catalog at the smallest parameters exercised by the regression suite.
pub fn regression_specs() -> Vec<FamilySpec> {
    use FamilyId::*;
    let mut out = Vec::new();
    let mut add = |f, ps: &[&[usize]]| {
        for p in ps {
            out.push(FamilySpec::new(f, p));
        }
    };
    add(AdjointSln, &[&[2], &[3]]);
    add(SoStandard, &[&[2], &[3], &[4]]);
    add(SoSymTraceless, &[&[2], &[3], &[4]]);
    add(OnomMatrix, &[&[2, 3]]);
    add(SpLambda2, &[&[1], &[2]]);
    add(SpnSpmTensor, &[&[1, 2]]);
    add(SlnStdDual, &[&[2], &[3]]);
    add(GlnSymPairs, &[&[1], &[2]]);
    add(GlnSkewPairs, &[&[2], &[3]]);
    add(SpnStdDual, &[&[1], &[2]]);
    add(GlnGlmTensorPairs, &[&[2, 3]]);
    add(Sl2Quartics, &[&[]]);
    add(So2DoubleStandard, &[&[]]);
    out
}

// ---------------------------------------------------------------------------
// Construction machinery

/// A vector in one of the model spaces: a tuple of matrices (a single matrix,
/// a pair, or column vectors stored as n×1 matrices).
type Elem = Vec<ExactMatrix>;
/// A linear map on elements.
type Action<'a> = Box<dyn Fn(&Elem) -> Elem + 'a>;

struct Built {
    gram: ExactMatrix,
    generators: Vec<ExactMatrix>,
}

/// Assembles the Gram matrix and generator matrices from a basis, a coordinate
/// map, the form and the infinitesimal actions.
fn assemble(
    basis: &[Elem],
    coords: impl Fn(&Elem) -> ExactVector,
    form: impl Fn(&Elem, &Elem) -> Rational,
    actions: &[Action<'_>],
) -> Built {
    let dim = basis.len();
    let mut gram = ExactMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            gram[(i, j)] = form(&basis[i], &basis[j]);
        }
    }
    let generators = actions
        .iter()
        .map(|act| {
            let cols: Vec<ExactVector> = basis.iter().map(|b| coords(&act(b))).collect();
            ExactMatrix::from_columns(dim, &cols).expect("coordinate length")
        })
        .collect();
    Built { gram, generators }
}

fn unit(rows: usize, cols: usize, i: usize, j: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(rows, cols);
    m[(i, j)] = rat(1);
    m
}

fn trace(m: &ExactMatrix) -> Rational {
    (0..m.rows()).map(|i| m[(i, i)].clone()).sum()
}

fn commutator(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    &(a * b) - &(b * a)
}

/// Symplectic matrix [[0, I], [-I, 0]] of size 2n.
fn omega(n: usize) -> ExactMatrix {
    let mut j = ExactMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = rat(1);
        j[(n + i, i)] = rat(-1);
    }
    j
}

/// E_ij + E_ji for i < j, E_ii for i = j.
fn sym_unit(n: usize, i: usize, j: usize) -> ExactMatrix {
    let mut m = unit(n, n, i, j);
    m[(j, i)] = rat(1);
    m
}

fn skew_unit(n: usize, i: usize, j: usize) -> ExactMatrix {
    let mut m = unit(n, n, i, j);
    m[(j, i)] = rat(-1);
    m
}

fn upper_pairs(n: usize, strict: bool) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| ((if strict { i + 1 } else { i })..n).map(move |j| (i, j)))
        .collect()
}

fn skew_basis(n: usize) -> Vec<ExactMatrix> {
    upper_pairs(n, true)
        .into_iter()
        .map(|(i, j)| skew_unit(n, i, j))
        .collect()
}

fn gl_basis(n: usize) -> Vec<ExactMatrix> {
    (0..n)
        .flat_map(|i| (0..n).map(move |j| unit(n, n, i, j)))
        .collect()
}

/// sl_n basis: strictly upper units, diagonal differences, strictly lower units.
fn sl_basis(n: usize) -> Vec<ExactMatrix> {
    let mut b: Vec<ExactMatrix> = upper_pairs(n, true)
        .into_iter()
        .map(|(i, j)| unit(n, n, i, j))
        .collect();
    for k in 0..n - 1 {
        let mut h = unit(n, n, k, k);
        h[(k + 1, k + 1)] = rat(-1);
        b.push(h);
    }
    for i in 0..n {
        for j in 0..i {
            b.push(unit(n, n, i, j));
        }
    }
    b
}

/// Coordinates of a traceless matrix in `sl_basis`.
fn sl_coords(x: &ExactMatrix) -> ExactVector {
    let n = x.rows();
    let mut c: ExactVector = upper_pairs(n, true)
        .into_iter()
        .map(|(i, j)| x[(i, j)].clone())
        .collect();
    let mut running = rat(0);
    for k in 0..n - 1 {
        running += &x[(k, k)];
        c.push(running.clone());
    }
    for i in 0..n {
        for j in 0..i {
            c.push(x[(i, j)].clone());
        }
    }
    c
}

/// sp(n) ⊂ gl_{2n} basis: [[E_ij, 0], [0, -E_ji]], then symmetric units in the
/// upper-right block, then in the lower-left block.
fn sp_basis(n: usize) -> Vec<ExactMatrix> {
    let mut b = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut m = ExactMatrix::zeros(2 * n, 2 * n);
            m[(i, j)] = rat(1);
            m[(n + j, n + i)] = rat(-1);
            b.push(m);
        }
    }
    for (row_off, col_off) in [(0, n), (n, 0)] {
        for (i, j) in upper_pairs(n, false) {
            let mut m = ExactMatrix::zeros(2 * n, 2 * n);
            m[(row_off + i, col_off + j)] = rat(1);
            m[(row_off + j, col_off + i)] = rat(1);
            b.push(m);
        }
    }
    b
}

fn row_major(x: &ExactMatrix) -> ExactVector {
    x.entries().to_vec()
}

fn matrix_units(rows: usize, cols: usize) -> Vec<ExactMatrix> {
    (0..rows)
        .flat_map(|i| (0..cols).map(move |j| unit(rows, cols, i, j)))
        .collect()
}

fn frobenius(a: &ExactMatrix, b: &ExactMatrix) -> Rational {
    a.entries().iter().zip(b.entries()).map(|(x, y)| x * y).sum()
}

fn column(n: usize, entries: impl IntoIterator<Item = Rational>) -> ExactMatrix {
    let v: Vec<ExactVector> = entries.into_iter().map(|x| vec![x]).collect();
    let m = ExactMatrix::from_rows(v).expect("column");
    assert_eq!(m.rows(), n);
    m
}

fn single(m: ExactMatrix) -> Elem {
    vec![m]
}

/// Embeds a basis of one summand into a pair, placing zeros in the other slot.
fn pair_basis(first: &[ExactMatrix], second: &[ExactMatrix]) -> Vec<Elem> {
    let zero_a = ExactMatrix::zeros(first[0].rows(), first[0].cols());
    let zero_b = ExactMatrix::zeros(second[0].rows(), second[0].cols());
    first
        .iter()
        .map(|a| vec![a.clone(), zero_b.clone()])
        .chain(second.iter().map(|b| vec![zero_a.clone(), b.clone()]))
        .collect()
}

type Family = (Built, Option<Vec<ExactVector>>);

fn std_vector(dim: usize, i: usize) -> ExactVector {
    let mut v = vec![rat(0); dim];
    v[i] = rat(1);
    v
}

fn adjoint_sln(n: usize) -> Family {
    let basis: Vec<Elem> = sl_basis(n).into_iter().map(single).collect();
    let ad: Vec<Action<'static>> = basis
        .iter()
        .map(|x| {
            let x = x[0].clone();
            Box::new(move |y: &Elem| vec![commutator(&x, &y[0])]) as Box<dyn Fn(&Elem) -> Elem>
        })
        .collect();
    let two_n = rat(2 * n as i64);
    let built = assemble(
        &basis,
        |e| sl_coords(&e[0]),
        |a, b| &two_n * trace(&(&a[0] * &b[0])),
        &ad,
    );
    // diagonal differences sit after the n(n-1)/2 strictly upper units
    let off = n * (n - 1) / 2;
    let dim = n * n - 1;
    let slice = (0..n - 1).map(|k| std_vector(dim, off + k)).collect();
    (built, Some(slice))
}

fn so_standard(n: usize) -> Family {
    let basis: Vec<Elem> = (0..n).map(|i| single(column(n, std_vector(n, i)))).collect();
    let actions: Vec<Action<'static>> = skew_basis(n)
        .into_iter()
        .map(|s| Box::new(move |v: &Elem| vec![&s * &v[0]]) as Box<dyn Fn(&Elem) -> Elem>)
        .collect();
    let built = assemble(&basis, |e| row_major(&e[0]), |a, b| frobenius(&a[0], &b[0]), &actions);
    (built, Some(vec![std_vector(n, 0)]))
}

fn so_sym_traceless(n: usize) -> Family {
    let mut basis: Vec<Elem> = Vec::new();
    for k in 0..n - 1 {
        let mut d = unit(n, n, k, k);
        d[(k + 1, k + 1)] = rat(-1);
        basis.push(single(d));
    }
    for (i, j) in upper_pairs(n, true) {
        basis.push(single(sym_unit(n, i, j)));
    }
    let coords = |e: &Elem| {
        let x = &e[0];
        let mut running = rat(0);
        let mut c: ExactVector = (0..n - 1)
            .map(|k| {
                running += &x[(k, k)];
                running.clone()
            })
            .collect();
        c.extend(upper_pairs(n, true).into_iter().map(|(i, j)| x[(i, j)].clone()));
        c
    };
    let actions: Vec<Action<'static>> = skew_basis(n)
        .into_iter()
        .map(|s| Box::new(move |x: &Elem| vec![commutator(&s, &x[0])]) as Box<dyn Fn(&Elem) -> Elem>)
        .collect();
    let built = assemble(&basis, coords, |a, b| frobenius(&a[0], &b[0]), &actions);
    let dim = basis.len();
    let slice = (0..n - 1).map(|k| std_vector(dim, k)).collect();
    (built, Some(slice))
}

fn onom_matrix(n: usize, m: usize) -> Family {
    let basis: Vec<Elem> = matrix_units(n, m).into_iter().map(single).collect();
    let mut actions: Vec<Action<'static>> = Vec::new();
    for a in skew_basis(n) {
        actions.push(Box::new(move |x: &Elem| vec![&a * &x[0]]));
    }
    for b in skew_basis(m) {
        let bt = b.transpose();
        actions.push(Box::new(move |x: &Elem| vec![&x[0] * &bt]));
    }
    let built = assemble(&basis, |e| row_major(&e[0]), |a, b| frobenius(&a[0], &b[0]), &actions);
    let slice = (0..n).map(|i| std_vector(n * m, i * m + i)).collect();
    (built, Some(slice))
}

fn sp_lambda2(n: usize) -> Family {
    let d = 2 * n;
    let pairs = upper_pairs(d, true);
    let basis: Vec<Elem> = pairs.iter().map(|&(i, j)| single(skew_unit(d, i, j))).collect();
    let j = omega(n);
    let jt = j.transpose();
    // For X = v∧w, Y = x∧y as skew matrices, Tr(Xᵀ J Y Jᵀ) is twice the wedge form.
    let form = |a: &Elem, b: &Elem| {
        let p = &(&(&a[0].transpose() * &j) * &b[0]) * &jt;
        trace(&p) / rat(2)
    };
    let actions: Vec<Action<'static>> = sp_basis(n)
        .into_iter()
        .map(|a| {
            let at = a.transpose();
            Box::new(move |x: &Elem| vec![&(&a * &x[0]) + &(&x[0] * &at)]) as Box<dyn Fn(&Elem) -> Elem>
        })
        .collect();
    let coords = |e: &Elem| pairs.iter().map(|&(i, k)| e[0][(i, k)].clone()).collect();
    let built = assemble(&basis, coords, form, &actions);
    let dim = pairs.len();
    let slice = (0..n)
        .map(|i| {
            let idx = pairs.iter().position(|&p| p == (i, n + i)).expect("pair present");
            std_vector(dim, idx)
        })
        .collect();
    (built, Some(slice))
}

fn spn_spm_tensor(n: usize, m: usize) -> Family {
    let (rows, cols) = (2 * n, 2 * m);
    let basis: Vec<Elem> = matrix_units(rows, cols).into_iter().map(single).collect();
    let jn = omega(n);
    let jm = omega(m);
    let form = |a: &Elem, b: &Elem| trace(&(&(&(&jn * &a[0]) * &jm) * &b[0].transpose()));
    let mut actions: Vec<Action<'static>> = Vec::new();
    for a in sp_basis(n) {
        actions.push(Box::new(move |x: &Elem| vec![&a * &x[0]]));
    }
    for b in sp_basis(m) {
        let bt = b.transpose();
        actions.push(Box::new(move |x: &Elem| vec![&x[0] * &bt]));
    }
    let built = assemble(&basis, |e| row_major(&e[0]), form, &actions);
    let dim = rows * cols;
    let slice = (0..n)
        .map(|i| {
            let mut v = std_vector(dim, i * cols + i);
            v[(n + i) * cols + m + i] = rat(1);
            v
        })
        .collect();
    (built, Some(slice))
}

fn sln_std_dual(n: usize) -> Family {
    let e: Vec<ExactMatrix> = (0..n).map(|i| column(n, std_vector(n, i))).collect();
    let basis = pair_basis(&e, &e);
    let form = |a: &Elem, b: &Elem| frobenius(&a[0], &b[1]) + frobenius(&b[0], &a[1]);
    let actions: Vec<Action<'static>> = sl_basis(n)
        .into_iter()
        .map(|a| {
            let neg_at = -&a.transpose();
            Box::new(move |x: &Elem| vec![&a * &x[0], &neg_at * &x[1]]) as Box<dyn Fn(&Elem) -> Elem>
        })
        .collect();
    let coords = |x: &Elem| [row_major(&x[0]), row_major(&x[1])].concat();
    let built = assemble(&basis, coords, form, &actions);
    let mut v = std_vector(2 * n, 0);
    v[n] = rat(1);
    (built, Some(vec![v]))
}

#[derive(Clone, Copy)]
enum PairKind {
    Symmetric,
    Skew,
}

fn gl_pairs(n: usize, kind: PairKind) -> Family {
    let positions = match kind {
        PairKind::Symmetric => upper_pairs(n, false),
        PairKind::Skew => upper_pairs(n, true),
    };
    let units: Vec<ExactMatrix> = positions
        .iter()
        .map(|&(i, j)| match kind {
            PairKind::Symmetric => sym_unit(n, i, j),
            PairKind::Skew => skew_unit(n, i, j),
        })
        .collect();
    let basis = pair_basis(&units, &units);
    let form = |a: &Elem, b: &Elem| trace(&(&a[0] * &b[1])) + trace(&(&a[1] * &b[0]));
    let actions: Vec<Action<'static>> = gl_basis(n)
        .into_iter()
        .map(|a| {
            let at = a.transpose();
            Box::new(move |x: &Elem| {
                let first = &(&a * &x[0]) + &(&x[0] * &at);
                let second = -&(&(&at * &x[1]) + &(&x[1] * &a));
                vec![first, second]
            }) as Box<dyn Fn(&Elem) -> Elem>
        })
        .collect();
    let coords = |x: &Elem| {
        positions
            .iter()
            .map(|&p| x[0][p].clone())
            .chain(positions.iter().map(|&p| x[1][p].clone()))
            .collect()
    };
    let built = assemble(&basis, coords, form, &actions);
    let half = positions.len();
    let slice_positions: Vec<(usize, usize)> = match kind {
        PairKind::Symmetric => (0..n).map(|i| (i, i)).collect(),
        PairKind::Skew => {
            let h = n / 2;
            // odd n leaves the middle row and column empty
            let shift = if n.is_multiple_of(2) { h } else { h + 1 };
            (0..h).map(|i| (i, shift + i)).collect()
        }
    };
    let slice = slice_positions
        .into_iter()
        .map(|p| {
            let idx = positions.iter().position(|&q| q == p).expect("slice position");
            let mut v = std_vector(2 * half, idx);
            v[half + idx] = rat(1);
            v
        })
        .collect();
    (built, Some(slice))
}

fn spn_std_dual(n: usize) -> Family {
    let d = 2 * n;
    let e: Vec<ExactMatrix> = (0..d).map(|i| column(d, std_vector(d, i))).collect();
    let basis = pair_basis(&e, &e);
    let j = omega(n);
    let form = |a: &Elem, b: &Elem| {
        (&(&a[0].transpose() * &j) * &b[1])[(0, 0)].clone()
            + (&(&b[0].transpose() * &j) * &a[1])[(0, 0)].clone()
    };
    let actions: Vec<Action<'static>> = sp_basis(n)
        .into_iter()
        .map(|a| Box::new(move |x: &Elem| vec![&a * &x[0], &a * &x[1]]) as Box<dyn Fn(&Elem) -> Elem>)
        .collect();
    let coords = |x: &Elem| [row_major(&x[0]), row_major(&x[1])].concat();
    let built = assemble(&basis, coords, form, &actions);
    let v: ExactVector = (0..d)
        .map(|_| rat(1))
        .chain((1..=d).map(|i| rat(i as i64)))
        .collect();
    (built, Some(vec![v]))
}

fn gln_glm_tensor_pairs(n: usize, m: usize) -> Family {
    let units = matrix_units(n, m);
    let basis = pair_basis(&units, &units);
    let form = |a: &Elem, b: &Elem| frobenius(&a[0], &b[1]) + frobenius(&b[0], &a[1]);
    let mut actions: Vec<Action<'static>> = Vec::new();
    for a in gl_basis(n) {
        let neg_at = -&a.transpose();
        actions.push(Box::new(move |x: &Elem| vec![&a * &x[0], &neg_at * &x[1]]));
    }
    for b in gl_basis(m) {
        let bt = b.transpose();
        let neg_b = -&b;
        actions.push(Box::new(move |x: &Elem| vec![&x[0] * &bt, &x[1] * &neg_b]));
    }
    let coords = |x: &Elem| [row_major(&x[0]), row_major(&x[1])].concat();
    let built = assemble(&basis, coords, form, &actions);
    let half = n * m;
    let slice = (0..n)
        .map(|i| {
            let mut v = std_vector(2 * half, i * m + i);
            v[half + i * m + i] = rat(1);
            v
        })
        .collect();
    (built, Some(slice))
}

fn sl2_quartics() -> Family {
    // basis index k is the monomial x^(4-k) y^k
    let mut gram = ExactMatrix::zeros(5, 5);
    for (k, g) in [12, -3, 2, -3, 12].into_iter().enumerate() {
        gram[(k, 4 - k)] = rat(g);
    }
    let mut e = ExactMatrix::zeros(5, 5); // x ∂/∂y
    let mut h = ExactMatrix::zeros(5, 5); // x ∂/∂x − y ∂/∂y
    let mut f = ExactMatrix::zeros(5, 5); // y ∂/∂x
    for k in 0..5usize {
        let ki = k as i64;
        h[(k, k)] = rat(4 - 2 * ki);
        if k > 0 {
            e[(k - 1, k)] = rat(ki);
        }
        if k < 4 {
            f[(k + 1, k)] = rat(4 - ki);
        }
    }
    let slice = vec![
        vec![rat(1), rat(0), rat(0), rat(0), rat(1)],
        vec![rat(0), rat(0), rat(1), rat(0), rat(0)],
    ];
    (
        Built {
            gram,
            generators: vec![e, h, f],
        },
        Some(slice),
    )
}

fn so2_double_standard() -> Family {
    let j = ExactMatrix::from_i64_rows(&[
        &[0, -1, 0, 0],
        &[1, 0, 0, 0],
        &[0, 0, 0, -1],
        &[0, 0, 1, 0],
    ]);
    (
        Built {
            gram: ExactMatrix::identity(4),
            generators: vec![j],
        },
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_has_every_family_once() {
        let list = catalog_list();
        assert_eq!(list.len(), 13);
        for f in FamilyId::ALL {
            assert_eq!(list.iter().filter(|t| t.family == f).count(), 1);
            assert_eq!(f.as_str().parse::<FamilyId>().unwrap(), f);
        }
        for t in &list {
            assert!(!t.form.is_empty() && !t.space.is_empty() && !t.slice.is_empty());
        }
        let ordered: Vec<_> = list.iter().map(|t| t.family).collect();
        assert_eq!(ordered, FamilyId::ALL.to_vec());
    }

    #[test]
    fn n_le_m_families_reject_n_above_m() {
        for f in [FamilyId::OnomMatrix, FamilyId::SpnSpmTensor, FamilyId::GlnGlmTensorPairs] {
            assert!(f.template().n_le_m);
            assert_eq!(
                catalog_build(&FamilySpec::new(f, &[3, 2])).unwrap_err(),
                CatalogError::NExceedsM { family: f, n: 3, m: 2 }
            );
            assert!(catalog_build(&FamilySpec::new(f, &[2, 2])).is_ok());
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            catalog_build(&FamilySpec::new(FamilyId::AdjointSln, &[1])),
            Err(CatalogError::BelowMinimum { name: "n", .. })
        ));
        assert!(matches!(
            catalog_build(&FamilySpec::new(FamilyId::Sl2Quartics, &[2])),
            Err(CatalogError::Arity { expected: 0, got: 1, .. })
        ));
        assert!(matches!("so3".parse::<FamilyId>(), Err(CatalogError::UnknownFamily(_))));
    }

    #[test]
    fn sl2_quartics_golden() {
        let e = catalog_build(&FamilySpec::new(FamilyId::Sl2Quartics, &[])).unwrap();
        assert_eq!(e.rep.dim, 5);
        assert_eq!(e.rep.gram[(0, 4)], rat(12));
        assert_eq!(e.rep.gram[(1, 3)], rat(-3));
        assert_eq!(e.rep.gram[(2, 2)], rat(2));
        assert_eq!(e.rep.generators.len(), 3);
        let s = e.slice.unwrap();
        assert_eq!(s.vectors[0], vec![rat(1), rat(0), rat(0), rat(0), rat(1)]);
        assert_eq!(s.vectors[1], vec![rat(0), rat(0), rat(1), rat(0), rat(0)]);
    }

    #[test]
    fn onom_2_3_shape() {
        let e = catalog_build(&FamilySpec::new(FamilyId::OnomMatrix, &[2, 3])).unwrap();
        assert_eq!(e.rep.dim, 6);
        assert_eq!(e.rep.generators.len(), 1 + 3);
        let s = e.slice.unwrap();
        assert_eq!(s.vectors, vec![std_vector(6, 0), std_vector(6, 4)]);
    }

    #[test]
    fn adjoint_sl2_killing_values() {
        let e = catalog_build(&FamilySpec::new(FamilyId::AdjointSln, &[2])).unwrap();
        // basis (e, h, f)
        let expected = ExactMatrix::from_i64_rows(&[&[0, 0, 4], &[0, 8, 0], &[4, 0, 0]]);
        assert_eq!(e.rep.gram, expected);
    }

    #[test]
    fn skew_pair_slices_follow_parity() {
        let even = catalog_build(&FamilySpec::new(FamilyId::GlnSkewPairs, &[4])).unwrap();
        // skew basis for n = 4: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3); slice uses (0,2), (1,3)
        let s = even.slice.unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.vectors[0][1], rat(1));
        assert_eq!(s.vectors[0][6 + 1], rat(1));
        assert_eq!(s.vectors[1][4], rat(1));
        let odd = catalog_build(&FamilySpec::new(FamilyId::GlnSkewPairs, &[3])).unwrap();
        // skew basis for n = 3: (0,1) (0,2) (1,2); slice uses (0,2)
        let s = odd.slice.unwrap();
        assert_eq!(s.vectors, vec![vec![rat(0), rat(1), rat(0), rat(0), rat(1), rat(0)]]);
    }

    #[test]
    fn dimensions_match_family_formulas() {
        let cases: &[(FamilyId, &[usize], usize, usize)] = &[
            (FamilyId::AdjointSln, &[3], 8, 8),
            (FamilyId::SoStandard, &[4], 4, 6),
            (FamilyId::SoSymTraceless, &[4], 9, 6),
            (FamilyId::SpLambda2, &[2], 6, 10),
            (FamilyId::SpnSpmTensor, &[1, 2], 8, 13),
            (FamilyId::SlnStdDual, &[3], 6, 8),
            (FamilyId::GlnSymPairs, &[2], 6, 4),
            (FamilyId::GlnSkewPairs, &[3], 6, 9),
            (FamilyId::SpnStdDual, &[2], 8, 10),
            (FamilyId::GlnGlmTensorPairs, &[2, 3], 12, 13),
            (FamilyId::So2DoubleStandard, &[], 4, 1),
        ];
        for &(f, p, dim, gens) in cases {
            let e = catalog_build(&FamilySpec::new(f, p)).unwrap();
            assert_eq!((e.rep.dim, e.rep.generators.len()), (dim, gens), "{f}");
        }
    }

    #[test]
    fn control_has_no_slice() {
        let e = catalog_build(&FamilySpec::new(FamilyId::So2DoubleStandard, &[])).unwrap();
        assert!(e.slice.is_none());
    }
}
