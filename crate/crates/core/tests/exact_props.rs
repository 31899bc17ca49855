use polar_ed::exact::{in_span, nullspace_basis, rank, rat, ExactMatrix, ExactVector};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, cols), rows)
}

fn exact(rows: &[Vec<i64>]) -> ExactMatrix {
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    ExactMatrix::from_i64_rows(&refs)
}

proptest! {
    #[test]
    fn rank_plus_nullity_is_column_count(rows in matrix(4, 5)) {
        let m = exact(&rows);
        let null = nullspace_basis(&m);
        prop_assert_eq!(rank(&m) + null.cols(), 5);
        prop_assert!((&m * &null).is_zero());
    }

    #[test]
    fn rank_is_invariant_under_scaling_and_transpose(rows in matrix(3, 4), c in 1i64..7) {
        let m = exact(&rows);
        prop_assert_eq!(rank(&m), rank(&m.scale(&rat(-c))));
        prop_assert_eq!(rank(&m), rank(&m.transpose()));
    }

    #[test]
    fn span_membership_agrees_with_rank(rows in matrix(3, 4), target in prop::collection::vec(-4i64..=4, 4)) {
        let spanners: Vec<ExactVector> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        let t: ExactVector = target.iter().map(|&x| rat(x)).collect();
        let before = rank(&ExactMatrix::from_rows(spanners.clone()).unwrap());
        let mut grown = spanners.clone();
        grown.push(t.clone());
        let after = rank(&ExactMatrix::from_rows(grown).unwrap());
        let membership = in_span(&t, &spanners).unwrap();
        prop_assert_eq!(membership.member, before == after);
        if let Some(coeffs) = membership.coeffs {
            let mut sum = vec![rat(0); 4];
            for (c, s) in coeffs.iter().zip(&spanners) {
                for (acc, x) in sum.iter_mut().zip(s) {
                    *acc += c * x;
                }
            }
            prop_assert_eq!(sum, t);
        }
    }
}
