//! Randomized exact test for polarity of an orthogonal representation, and
//! slice extraction/certification.
//!
//! At a sampled point `v` the test forms, in the variables `(u, w) ∈ V × V`,
//! the linear forms `⟨u|A_i v⟩` and `⟨w|A_i v⟩` and asks whether every
//! quadratic `q_j(u, w) = ⟨u|A_j w⟩` lies in the degree-two part of the ideal
//! they generate, i.e. in the span of all products `x_a · ℓ` with `x_a` a
//! coordinate and `ℓ` one of the linear forms. Sampling integer points stands
//! in for working over the field of rational functions; unanimity over several
//! seeds is required before a verdict is returned.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::{
    self, format_rational, in_span, nullspace_basis, rank, rat, restricted_form_nondegenerate,
    ExactMatrix, ExactVector, Rational,
};
use crate::rep::{OrthogonalRep, SliceBasis, SliceStatus};

pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_TRIALS: usize = 3;
/// Trials are doubled on disagreement until this cap is exceeded.
pub const MAX_TRIALS: usize = 12;
/// Sampled coordinates are uniform integers in `[-SAMPLE_BOUND, SAMPLE_BOUND]`.
pub const SAMPLE_BOUND: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolarityError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(
        "no sample among {trials} attained a maximal orbit tangent (dimension {orbit_dim}) \
         on which the form is non-degenerate; rerun with more trials or another seed"
    )]
    Degenerate { trials: usize, orbit_dim: usize },
    #[error("samples disagree after {trials} trials ({polar} polar, {not_polar} not polar)")]
    Inconclusive {
        trials: usize,
        polar: usize,
        not_polar: usize,
    },
    #[error(
        "orbit tangent at the supplied vector has dimension {found} (generic {generic}) or a \
         degenerate form; resample the vector"
    )]
    DegenerateVector { found: usize, generic: usize },
    #[error("vector has length {got}, representation has dimension {dim}")]
    Length { got: usize, dim: usize },
    #[error("invalid slice: {0}")]
    Slice(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Polar,
    NotPolar,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Polar => "POLAR",
            Verdict::NotPolar => "NOT_POLAR",
        })
    }
}

/// How membership of the quadratics is decided. Both routes are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipRoute {
    /// Reduce each quadratic modulo the linear forms: it lies in the span iff
    /// it vanishes on their common kernel.
    #[default]
    Kernel,
    /// Literal span membership in the coefficient space of all quadratics.
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarityOptions {
    pub seed: u64,
    pub trials: usize,
    pub max_trials: usize,
    pub route: MembershipRoute,
}

impl Default for PolarityOptions {
    fn default() -> Self {
        PolarityOptions {
            seed: DEFAULT_SEED,
            trials: DEFAULT_TRIALS,
            max_trials: MAX_TRIALS,
            route: MembershipRoute::Kernel,
        }
    }
}

impl PolarityOptions {
    pub fn with_seed(seed: u64, trials: usize) -> Self {
        PolarityOptions {
            seed,
            trials,
            ..Default::default()
        }
    }
}

fn serialize_vector<S: Serializer>(v: &ExactVector, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&format_rational(x))?;
    }
    seq.end()
}

/// Seed of the `t`-th sample derived from a base seed.
pub fn sample_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_add(t as u64)
}

fn random_integers(len: usize, seed: u64) -> ExactVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| rat(rng.random_range(-SAMPLE_BOUND..=SAMPLE_BOUND)))
        .collect()
}

/// Deterministic pseudo-random integer point of `V`.
pub fn generic_vector(rep: &OrthogonalRep, seed: u64) -> ExactVector {
    random_integers(rep.dim, seed)
}

/// The vectors `A_1 v, …, A_n v`, spanning the tangent space to the orbit at `v`.
pub fn orbit_tangent(rep: &OrthogonalRep, v: &[Rational]) -> Vec<ExactVector> {
    (0..rep.generators.len()).map(|i| rep.act(i, v)).collect()
}

fn span_rank(dim: usize, vectors: &[ExactVector]) -> usize {
    rank(&ExactMatrix::from_columns(dim, vectors).expect("vector lengths match dim"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitSample {
    pub seed: u64,
    pub rank: usize,
    /// Whether the form restricted to the orbit tangent is non-degenerate.
    pub nondegenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitSurvey {
    pub orbit_dim: usize,
    pub samples: Vec<OrbitSample>,
}

impl OrbitSurvey {
    /// Samples attaining the maximal rank with a non-degenerate restricted form.
    pub fn usable(&self) -> impl Iterator<Item = &OrbitSample> {
        self.samples
            .iter()
            .filter(move |s| s.rank == self.orbit_dim && s.nondegenerate)
    }
}

fn orbit_sample(rep: &OrthogonalRep, seed: u64) -> (ExactVector, OrbitSample) {
    let v = generic_vector(rep, seed);
    let tangent = orbit_tangent(rep, &v);
    let rank = span_rank(rep.dim, &tangent);
    let nondegenerate =
        restricted_form_nondegenerate(&rep.gram, &tangent).expect("validated gram is symmetric");
    (v, OrbitSample { seed, rank, nondegenerate })
}

/// Generic orbit dimension: the largest tangent rank over `trials` samples.
pub fn generic_orbit_dimension(
    rep: &OrthogonalRep,
    seed: u64,
    trials: usize,
) -> Result<OrbitSurvey, PolarityError> {
    if trials == 0 {
        return Err(PolarityError::NoTrials);
    }
    let samples: Vec<OrbitSample> = (0..trials)
        .map(|t| orbit_sample(rep, sample_seed(seed, t)).1)
        .collect();
    let orbit_dim = samples.iter().map(|s| s.rank).max().unwrap_or(0);
    Ok(OrbitSurvey { orbit_dim, samples })
}

/// Index of the monomial `x_a x_b` (`a ≤ b`) among the degree-two monomials in
/// `nvars` variables, ordered lexicographically by `(a, b)`.
pub fn monomial_index(nvars: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    a * (2 * nvars + 1 - a) / 2 + (b - a)
}

pub fn monomial_count(nvars: usize) -> usize {
    nvars * (nvars + 1) / 2
}

/// The linear and quadratic data of the criterion at one point `v`, in the
/// `2·dim` variables `x = (u, w)`.
#[derive(Debug, Clone)]
pub struct CriterionSystem {
    pub nvars: usize,
    /// `⟨u|A_i v⟩` for every `i`, followed by `⟨w|A_i v⟩` for every `i`.
    pub linear_forms: Vec<ExactVector>,
    /// `⟨u|A_j w⟩` as coefficient vectors over the degree-two monomials.
    pub quadratics: Vec<ExactVector>,
}

impl CriterionSystem {
    pub fn at(rep: &OrthogonalRep, v: &[Rational]) -> Self {
        let d = rep.dim;
        let nvars = 2 * d;
        let tangent = orbit_tangent(rep, v);
        let covectors: Vec<ExactVector> = tangent.iter().map(|t| rep.gram.mul_vec(t)).collect();
        let mut linear_forms = Vec::with_capacity(2 * covectors.len());
        for offset in [0, d] {
            for c in &covectors {
                let mut l = vec![rat(0); nvars];
                l[offset..offset + d].clone_from_slice(c);
                linear_forms.push(l);
            }
        }
        let quadratics = rep
            .generators
            .iter()
            .map(|a| {
                let ga = &rep.gram * a;
                let mut q = vec![rat(0); monomial_count(nvars)];
                for k in 0..d {
                    for l in 0..d {
                        q[monomial_index(nvars, k, d + l)] = ga[(k, l)].clone();
                    }
                }
                q
            })
            .collect();
        CriterionSystem {
            nvars,
            linear_forms,
            quadratics,
        }
    }

    /// All products `x_a · ℓ` as coefficient vectors.
    pub fn spanning_set(&self) -> Vec<ExactVector> {
        let n = self.nvars;
        let mut out = Vec::with_capacity(n * self.linear_forms.len());
        for l in &self.linear_forms {
            for a in 0..n {
                let mut p = vec![rat(0); monomial_count(n)];
                for (b, c) in l.iter().enumerate() {
                    if !num_traits::Zero::is_zero(c) {
                        p[monomial_index(n, a, b)] += c;
                    }
                }
                out.push(p);
            }
        }
        out
    }

    /// Symmetric matrix `Q` with `q(x) = xᵀ Q x`.
    fn symmetric_matrix(&self, q: &[Rational]) -> ExactMatrix {
        let n = self.nvars;
        let half = exact::ratio(1, 2);
        let mut m = ExactMatrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let c = &q[monomial_index(n, a, b)];
                if a == b {
                    m[(a, a)] = c.clone();
                } else {
                    m[(a, b)] = c * &half;
                    m[(b, a)] = c * &half;
                }
            }
        }
        m
    }

    /// Membership of each quadratic in the span of the products.
    pub fn membership(&self, route: MembershipRoute) -> Vec<bool> {
        match route {
            MembershipRoute::Kernel => {
                let l = ExactMatrix::from_rows(self.linear_forms.clone())
                    .expect("linear forms share a length");
                let k = if l.rows() == 0 {
                    ExactMatrix::identity(self.nvars)
                } else {
                    nullspace_basis(&l)
                };
                let kt = k.transpose();
                self.quadratics
                    .iter()
                    .map(|q| (&(&kt * &self.symmetric_matrix(q)) * &k).is_zero())
                    .collect()
            }
            MembershipRoute::Dense => {
                let spanners = self.spanning_set();
                self.quadratics
                    .iter()
                    .map(|q| in_span(q, &spanners).expect("coefficient lengths match").member)
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleRecord {
    pub seed: u64,
    pub orbit_rank: usize,
    pub nondegenerate: bool,
    /// Per-generator membership results; absent when the sample was not usable.
    pub membership: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub seed: u64,
    #[serde(serialize_with = "serialize_vector")]
    pub vector: ExactVector,
    /// Index of a generator whose quadratic failed membership.
    pub generator: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarityReport {
    pub verdict: Verdict,
    pub dim: usize,
    pub orbit_dim: usize,
    pub cohomogeneity: usize,
    pub seed: u64,
    pub trials: usize,
    pub route: MembershipRoute,
    pub samples: Vec<SampleRecord>,
    pub witness: Option<Witness>,
}

impl PolarityReport {
    /// The point of a usable sample, for slice extraction.
    pub fn usable_vector(&self, rep: &OrthogonalRep) -> Option<ExactVector> {
        self.samples
            .iter()
            .find(|s| s.membership.is_some())
            .map(|s| generic_vector(rep, s.seed))
    }
}

struct Sample {
    v: ExactVector,
    info: OrbitSample,
    membership: Option<Vec<bool>>,
}

/// Runs the polarity criterion with unanimity over the sampled points.
pub fn polarity_test(
    rep: &OrthogonalRep,
    opts: &PolarityOptions,
) -> Result<PolarityReport, PolarityError> {
    if opts.trials == 0 {
        return Err(PolarityError::NoTrials);
    }
    let mut trials = opts.trials;
    let mut samples: Vec<Sample> = Vec::new();
    loop {
        while samples.len() < trials {
            let (v, info) = orbit_sample(rep, sample_seed(opts.seed, samples.len()));
            samples.push(Sample {
                v,
                info,
                membership: None,
            });
        }
        let orbit_dim = samples.iter().map(|s| s.info.rank).max().unwrap_or(0);
        let usable: Vec<usize> = (0..samples.len())
            .filter(|&i| samples[i].info.rank == orbit_dim && samples[i].info.nondegenerate)
            .collect();
        if usable.is_empty() {
            return Err(PolarityError::Degenerate { trials, orbit_dim });
        }
        for &i in &usable {
            if samples[i].membership.is_none() {
                let system = CriterionSystem::at(rep, &samples[i].v);
                samples[i].membership = Some(system.membership(opts.route));
            }
        }
        let passes = |i: &usize| samples[*i].membership.as_ref().unwrap().iter().all(|&m| m);
        let polar = usable.iter().filter(|i| passes(i)).count();
        let not_polar = usable.len() - polar;
        let verdict = if not_polar == 0 {
            Some(Verdict::Polar)
        } else if polar == 0 {
            Some(Verdict::NotPolar)
        } else {
            None
        };
        if let Some(verdict) = verdict {
            let witness = (verdict == Verdict::NotPolar).then(|| {
                let s = &samples[usable[0]];
                let generator = s
                    .membership
                    .as_ref()
                    .unwrap()
                    .iter()
                    .position(|&m| !m)
                    .expect("failing sample has a failing generator");
                Witness {
                    seed: s.info.seed,
                    vector: s.v.clone(),
                    generator,
                }
            });
            let records = samples
                .iter()
                .enumerate()
                .map(|(i, s)| SampleRecord {
                    seed: s.info.seed,
                    orbit_rank: s.info.rank,
                    nondegenerate: s.info.nondegenerate,
                    membership: if usable.contains(&i) {
                        s.membership.clone()
                    } else {
                        None
                    },
                })
                .collect();
            return Ok(PolarityReport {
                verdict,
                dim: rep.dim,
                orbit_dim,
                cohomogeneity: rep.dim - orbit_dim,
                seed: opts.seed,
                trials,
                route: opts.route,
                samples: records,
                witness,
            });
        }
        if trials >= opts.max_trials {
            return Err(PolarityError::Inconclusive {
                trials,
                polar,
                not_polar,
            });
        }
        trials = (trials * 2).min(opts.max_trials);
    }
}

/// The orthogonal complement of the orbit tangent at `v`.
pub fn extract_slice(rep: &OrthogonalRep, v: &[Rational]) -> Result<SliceBasis, PolarityError> {
    if v.len() != rep.dim {
        return Err(PolarityError::Length {
            got: v.len(),
            dim: rep.dim,
        });
    }
    let generic = generic_orbit_dimension(rep, DEFAULT_SEED, DEFAULT_TRIALS)?.orbit_dim;
    let tangent = orbit_tangent(rep, v);
    let found = span_rank(rep.dim, &tangent);
    let nondegenerate =
        restricted_form_nondegenerate(&rep.gram, &tangent).expect("validated gram is symmetric");
    if found != generic || !nondegenerate {
        return Err(PolarityError::DegenerateVector { found, generic });
    }
    Ok(SliceBasis::claimed(perp_basis(rep, &tangent)))
}

/// Basis of `{x : ⟨x|t⟩ = 0 for all t}`.
fn perp_basis(rep: &OrthogonalRep, vectors: &[ExactVector]) -> Vec<ExactVector> {
    if vectors.is_empty() {
        return ExactMatrix::identity(rep.dim).columns();
    }
    let rows: Vec<ExactVector> = vectors.iter().map(|t| rep.gram.mul_vec(t)).collect();
    let m = ExactMatrix::from_rows(rows).expect("equal lengths");
    nullspace_basis(&m).columns()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SliceCondition {
    /// Orbit tangent at a generic slice point has complementary dimension.
    #[serde(rename = "a")]
    ComplementaryDimension,
    /// Slice is orthogonal to the orbit tangent at its points.
    #[serde(rename = "b")]
    Orthogonal,
    /// Form restricted to the slice is non-degenerate.
    #[serde(rename = "c")]
    NonDegenerate,
}

impl fmt::Display for SliceCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SliceCondition::ComplementaryDimension => "(a) orbit tangent has complementary dimension",
            SliceCondition::Orthogonal => "(b) slice orthogonal to orbit tangent",
            SliceCondition::NonDegenerate => "(c) form non-degenerate on slice",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SliceVerdict {
    Certified,
    Rejected {
        condition: SliceCondition,
        #[serde(serialize_with = "serialize_vector")]
        witness: ExactVector,
    },
}

impl SliceVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, SliceVerdict::Certified)
    }
}

/// Checks a claimed slice at `trials` random points of its span.
pub fn verify_slice(
    rep: &OrthogonalRep,
    slice: &SliceBasis,
    seed: u64,
    trials: usize,
) -> Result<SliceVerdict, PolarityError> {
    if trials == 0 {
        return Err(PolarityError::NoTrials);
    }
    slice
        .check(rep.dim)
        .map_err(|e| PolarityError::Slice(e.to_string()))?;
    let k = slice.dim();
    let target_rank = rep.dim - k;
    let points: Vec<ExactVector> = (0..trials)
        .map(|t| {
            let c = random_integers(k, sample_seed(seed, t));
            let mut v0 = vec![rat(0); rep.dim];
            for (ci, s) in c.iter().zip(&slice.vectors) {
                for (x, y) in v0.iter_mut().zip(s) {
                    *x += ci * y;
                }
            }
            v0
        })
        .collect();
    let tangents: Vec<Vec<ExactVector>> = points.iter().map(|v| orbit_tangent(rep, v)).collect();
    let reject = |condition, witness: &ExactVector| {
        Ok(SliceVerdict::Rejected {
            condition,
            witness: witness.clone(),
        })
    };
    if tangents.iter().all(|t| span_rank(rep.dim, t) != target_rank) {
        return reject(SliceCondition::ComplementaryDimension, &points[0]);
    }
    for (v0, tangent) in points.iter().zip(&tangents) {
        let orthogonal = slice
            .vectors
            .iter()
            .all(|s| tangent.iter().all(|t| num_traits::Zero::is_zero(&rep.form(s, t))));
        if !orthogonal {
            return reject(SliceCondition::Orthogonal, v0);
        }
    }
    let nondegenerate =
        restricted_form_nondegenerate(&rep.gram, &slice.vectors).expect("validated gram is symmetric");
    if !nondegenerate {
        return reject(SliceCondition::NonDegenerate, &points[0]);
    }
    Ok(SliceVerdict::Certified)
}

/// Verifies a slice and, on success, returns it marked as certified.
pub fn certify_slice(
    rep: &OrthogonalRep,
    slice: &SliceBasis,
    seed: u64,
    trials: usize,
) -> Result<(SliceVerdict, SliceBasis), PolarityError> {
    let verdict = verify_slice(rep, slice, seed, trials)?;
    let mut out = slice.clone();
    if verdict.is_certified() {
        out.status = SliceStatus::Certified;
    }
    Ok((verdict, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_build, FamilyId, FamilySpec};

    fn build(f: FamilyId, p: &[usize]) -> OrthogonalRep {
        catalog_build(&FamilySpec::new(f, p)).unwrap().rep
    }

    fn v(xs: &[i64]) -> ExactVector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn monomial_indexing_is_a_bijection() {
        for n in 1..7 {
            let mut seen = vec![false; monomial_count(n)];
            let mut expected = 0;
            for a in 0..n {
                for b in a..n {
                    let i = monomial_index(n, a, b);
                    assert_eq!(i, expected, "lexicographic order");
                    assert_eq!(monomial_index(n, b, a), i);
                    assert!(!seen[i]);
                    seen[i] = true;
                    expected += 1;
                }
            }
        }
    }

    #[test]
    fn generic_vector_is_deterministic_and_bounded() {
        let rep = build(FamilyId::Sl2Quartics, &[]);
        let a = generic_vector(&rep, 7);
        assert_eq!(a, generic_vector(&rep, 7));
        assert_ne!(a, generic_vector(&rep, 8));
        let bound = rat(SAMPLE_BOUND);
        for seed in 0..20 {
            let x = generic_vector(&rep, seed);
            assert_eq!(x.len(), 5);
            assert!(x.iter().all(|c| c <= &bound && c >= &-&bound));
        }
    }

    #[test]
    fn orbit_tangent_examples() {
        let quartics = build(FamilyId::Sl2Quartics, &[]);
        let zero = orbit_tangent(&quartics, &v(&[0, 0, 0, 0, 0]));
        assert!(zero.iter().all(|t| exact::is_zero_vector(t)));
        assert_eq!(span_rank(5, &zero), 0);
        let t = orbit_tangent(&quartics, &v(&[1, 0, 1, 0, 1]));
        assert_eq!(span_rank(5, &t), 3);

        let so3 = build(FamilyId::SoStandard, &[3]);
        let t = orbit_tangent(&so3, &v(&[1, 0, 0]));
        assert_eq!(span_rank(3, &t), 2);
        let m = ExactMatrix::from_columns(3, &t).unwrap();
        assert!(m.row(0).iter().all(num_traits::Zero::is_zero), "tangent lies in span(e2, e3)");
    }

    #[test]
    fn generic_orbit_dimension_examples() {
        let cases: &[(FamilyId, &[usize], usize)] = &[
            (FamilyId::SoStandard, &[3], 2),
            (FamilyId::Sl2Quartics, &[], 3),
            (FamilyId::AdjointSln, &[2], 2),
        ];
        for &(f, p, expected) in cases {
            let s = generic_orbit_dimension(&build(f, p), DEFAULT_SEED, 3).unwrap();
            assert_eq!(s.orbit_dim, expected, "{f}");
            assert!(s.usable().count() > 0);
        }
        assert_eq!(
            generic_orbit_dimension(&build(FamilyId::SoStandard, &[3]), 1, 0),
            Err(PolarityError::NoTrials)
        );
    }

    #[test]
    fn negative_control_witness_pair_fails_exactly() {
        // at v = (e1, e2): u = (e2, e1) and u' = (e1, 0) are orthogonal to g·v,
        // yet <u | J u'> = 1
        let rep = build(FamilyId::So2DoubleStandard, &[]);
        let point = v(&[1, 0, 0, 1]);
        let u = v(&[0, 1, 1, 0]);
        let u2 = v(&[1, 0, 0, 0]);
        let tangent = orbit_tangent(&rep, &point);
        for t in &tangent {
            assert_eq!(rep.form(&u, t), rat(0));
            assert_eq!(rep.form(&u2, t), rat(0));
        }
        assert_eq!(rep.form(&u, &rep.act(0, &u2)), rat(1));
        let system = CriterionSystem::at(&rep, &point);
        assert_eq!(system.membership(MembershipRoute::Kernel), vec![false]);
        assert_eq!(system.membership(MembershipRoute::Dense), vec![false]);
    }

    #[test]
    fn in_span_rejects_control_target_at_random_point() {
        let rep = build(FamilyId::So2DoubleStandard, &[]);
        let point = generic_vector(&rep, 99);
        let system = CriterionSystem::at(&rep, &point);
        let r = in_span(&system.quadratics[0], &system.spanning_set()).unwrap();
        assert!(!r.member);
    }

    #[test]
    fn dense_membership_coefficients_reproduce_target() {
        let rep = build(FamilyId::SoStandard, &[3]);
        let system = CriterionSystem::at(&rep, &generic_vector(&rep, 5));
        let spanners = system.spanning_set();
        for q in &system.quadratics {
            let r = in_span(q, &spanners).unwrap();
            let c = r.coeffs.unwrap();
            let mut sum = vec![rat(0); q.len()];
            for (ci, s) in c.iter().zip(&spanners) {
                for (x, y) in sum.iter_mut().zip(s) {
                    *x += ci * y;
                }
            }
            assert_eq!(&sum, q);
        }
    }

    #[test]
    fn routes_agree_on_small_reps() {
        let cases: &[(FamilyId, &[usize])] = &[
            (FamilyId::SoStandard, &[3]),
            (FamilyId::AdjointSln, &[2]),
            (FamilyId::Sl2Quartics, &[]),
            (FamilyId::So2DoubleStandard, &[]),
            (FamilyId::GlnSkewPairs, &[2]),
            (FamilyId::SoSymTraceless, &[3]),
        ];
        for &(f, p) in cases {
            let rep = build(f, p);
            for seed in [1, 2] {
                let system = CriterionSystem::at(&rep, &generic_vector(&rep, seed));
                assert_eq!(
                    system.membership(MembershipRoute::Kernel),
                    system.membership(MembershipRoute::Dense),
                    "{f} seed {seed}"
                );
            }
        }
    }

    #[test]
    fn quartics_polar_and_control_not() {
        let rep = build(FamilyId::Sl2Quartics, &[]);
        let r = polarity_test(&rep, &PolarityOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Polar);
        assert_eq!((r.orbit_dim, r.cohomogeneity), (3, 2));
        assert!(r.witness.is_none());

        let rep = build(FamilyId::So2DoubleStandard, &[]);
        let r = polarity_test(&rep, &PolarityOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::NotPolar);
        assert_eq!(r.witness.as_ref().unwrap().generator, 0);
        assert_eq!(r.cohomogeneity, 3);
    }

    #[test]
    fn extract_slice_examples() {
        let rep = build(FamilyId::Sl2Quartics, &[]);
        let s = extract_slice(&rep, &v(&[1, 0, 1, 0, 1])).unwrap();
        let expected = vec![v(&[1, 0, 0, 0, 1]), v(&[0, 0, 1, 0, 0])];
        assert_eq!(
            exact::canonical_span(5, &s.vectors).unwrap(),
            exact::canonical_span(5, &expected).unwrap()
        );

        let rep = build(FamilyId::SoStandard, &[4]);
        let s = extract_slice(&rep, &v(&[1, 0, 0, 0])).unwrap();
        assert_eq!(s.vectors, vec![v(&[1, 0, 0, 0])]);

        // x^4 alone has a 2-dimensional orbit tangent
        let rep = build(FamilyId::Sl2Quartics, &[]);
        assert!(matches!(
            extract_slice(&rep, &v(&[1, 0, 0, 0, 0])),
            Err(PolarityError::DegenerateVector { found: 2, generic: 3 })
        ));
    }

    #[test]
    fn adjoint_slice_is_a_centralizer() {
        let rep = build(FamilyId::AdjointSln, &[2]);
        let point = generic_vector(&rep, 11);
        let s = extract_slice(&rep, &point).unwrap();
        assert_eq!(s.dim(), 1);
        // coordinates (e, h, f) -> matrix [[h, e], [f, -h]]
        let to_matrix = |c: &[Rational]| {
            ExactMatrix::from_rows(vec![
                vec![c[1].clone(), c[0].clone()],
                vec![c[2].clone(), -&c[1]],
            ])
            .unwrap()
        };
        let x = to_matrix(&s.vectors[0]);
        let y = to_matrix(&point);
        assert!((&(&x * &y) - &(&y * &x)).is_zero());
    }

    #[test]
    fn verify_slice_examples() {
        let rep = build(FamilyId::SoStandard, &[3]);
        let wrong = SliceBasis::claimed(vec![v(&[1, 0, 0]), v(&[0, 1, 0])]);
        assert!(matches!(
            verify_slice(&rep, &wrong, DEFAULT_SEED, 3).unwrap(),
            SliceVerdict::Rejected { condition: SliceCondition::ComplementaryDimension, .. }
        ));
        let right = SliceBasis::claimed(vec![v(&[0, 0, 5])]);
        assert!(verify_slice(&rep, &right, DEFAULT_SEED, 3).unwrap().is_certified());

        // an isotropic line in the hyperbolic plane fails non-degeneracy
        let rep = build(FamilyId::SlnStdDual, &[2]);
        let isotropic = SliceBasis::claimed(vec![v(&[1, 0, 0, 0])]);
        assert!(!verify_slice(&rep, &isotropic, DEFAULT_SEED, 3).unwrap().is_certified());
    }

    #[test]
    fn onom_slice_must_be_orthogonal_to_orbits() {
        let rep = build(FamilyId::OnomMatrix, &[2, 3]);
        // E_00 + E_01 and E_11: span(slice) is not orthogonal to the orbit tangent
        let bad = SliceBasis::claimed(vec![v(&[1, 1, 0, 0, 0, 0]), v(&[0, 0, 0, 0, 1, 0])]);
        assert!(matches!(
            verify_slice(&rep, &bad, DEFAULT_SEED, 3).unwrap(),
            SliceVerdict::Rejected { condition: SliceCondition::Orthogonal, .. }
        ));
        // units in distinct rows and columns are a permuted copy of the diagonal slice
        let permuted = SliceBasis::claimed(vec![v(&[0, 0, 1, 0, 0, 0]), v(&[0, 0, 0, 0, 1, 0])]);
        assert!(verify_slice(&rep, &permuted, DEFAULT_SEED, 3).unwrap().is_certified());
    }

    #[test]
    fn report_is_deterministic() {
        let rep = build(FamilyId::AdjointSln, &[3]);
        let opts = PolarityOptions::with_seed(42, 3);
        assert_eq!(polarity_test(&rep, &opts).unwrap(), polarity_test(&rep, &opts).unwrap());
    }
}
