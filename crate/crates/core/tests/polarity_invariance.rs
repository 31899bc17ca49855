use polar_ed::catalog::{catalog_build, FamilyId, FamilySpec};
use polar_ed::exact::{rat, scale_vector};
use polar_ed::polarity::{
    generic_vector, polarity_test, CriterionSystem, MembershipRoute, PolarityOptions, Verdict,
};
use polar_ed::rep::OrthogonalRep;

fn build(family: FamilyId, params: &[usize]) -> OrthogonalRep {
    catalog_build(&FamilySpec::new(family, params)).unwrap().rep
}

fn small_reps() -> Vec<OrthogonalRep> {
    vec![
        build(FamilyId::Sl2Quartics, &[]),
        build(FamilyId::So2DoubleStandard, &[]),
        build(FamilyId::AdjointSln, &[2]),
        build(FamilyId::SoStandard, &[3]),
        build(FamilyId::SlnStdDual, &[2]),
    ]
}

#[test]
fn membership_is_invariant_under_rescaling_the_point() {
    for rep in small_reps() {
        let v = generic_vector(&rep, 11);
        let base = CriterionSystem::at(&rep, &v).membership(MembershipRoute::Kernel);
        for c in [-3, 2, 7] {
            let w = scale_vector(&v, &rat(c));
            assert_eq!(CriterionSystem::at(&rep, &w).membership(MembershipRoute::Kernel), base, "{}", rep.name);
        }
    }
}

#[test]
fn verdict_is_invariant_under_a_change_of_generator_basis() {
    for rep in small_reps() {
        let before = polarity_test(&rep, &PolarityOptions::default()).unwrap().verdict;
        let mut mixed = rep.clone();
        let k = mixed.generators.len();
        // an invertible triangular change of basis of the Lie algebra
        for i in 0..k {
            for j in i + 1..k {
                let shifted = &mixed.generators[i] + &rep.generators[j].scale(&rat((i + 2 * j) as i64));
                mixed.generators[i] = shifted;
            }
        }
        let after = polarity_test(&mixed, &PolarityOptions::default()).unwrap().verdict;
        assert_eq!(before, after, "{}", rep.name);
    }
}

#[test]
fn kernel_and_dense_routes_agree() {
    for rep in small_reps() {
        for seed in [1, 2] {
            let v = generic_vector(&rep, seed);
            let system = CriterionSystem::at(&rep, &v);
            assert_eq!(
                system.membership(MembershipRoute::Kernel),
                system.membership(MembershipRoute::Dense),
                "{}",
                rep.name
            );
        }
    }
}

#[test]
fn verdicts_do_not_depend_on_the_seed() {
    let quartics = build(FamilyId::Sl2Quartics, &[]);
    let control = build(FamilyId::So2DoubleStandard, &[]);
    for seed in [0, 99, 123_456] {
        let opts = PolarityOptions::with_seed(seed, 3);
        assert_eq!(polarity_test(&quartics, &opts).unwrap().verdict, Verdict::Polar);
        assert_eq!(polarity_test(&control, &opts).unwrap().verdict, Verdict::NotPolar);
    }
}

#[test]
fn every_claimed_catalog_slice_is_certified() {
    use polar_ed::catalog::regression_specs;
    use polar_ed::polarity::{verify_slice, DEFAULT_SEED};
    for spec in regression_specs() {
        let entry = catalog_build(&spec).unwrap();
        match &entry.slice {
            Some(slice) => {
                let verdict = verify_slice(&entry.rep, slice, DEFAULT_SEED, 3).unwrap();
                assert!(verdict.is_certified(), "{}: {verdict:?}", spec.label());
            }
            None => assert_eq!(spec.family, FamilyId::So2DoubleStandard),
        }
    }
}

#[test]
fn extracted_slices_are_certified() {
    use polar_ed::polarity::{extract_slice, verify_slice};
    for rep in small_reps().into_iter().filter(|r| r.name != "so2-double-standard") {
        let report = polarity_test(&rep, &PolarityOptions::default()).unwrap();
        let v = report.usable_vector(&rep).unwrap();
        let slice = extract_slice(&rep, &v).unwrap();
        assert_eq!(slice.dim(), report.cohomogeneity, "{}", rep.name);
        assert!(verify_slice(&rep, &slice, 5, 3).unwrap().is_certified(), "{}", rep.name);
    }
}
