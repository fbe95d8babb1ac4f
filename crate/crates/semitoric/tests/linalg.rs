use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use semitoric::linalg::{
    hnf_rows, kernel_saturation, primitive_from_rational, rank_and_nullspace, smith_normal_form,
    solve_linear, IntMatrix, RatMatrix,
};
use semitoric::{int, rat, ratio, Int, Rat};

fn imat(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>())
}

fn rmat(rows: &[&[i64]]) -> RatMatrix {
    RatMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect::<Vec<_>>())
}

fn check_snf(a: &IntMatrix) {
    let (u, s, v) = smith_normal_form(a);
    assert_eq!(u.mul(a).mul(&v), s, "U*A*V must equal S");
    assert!(u.det().abs().is_one(), "U must be unimodular");
    assert!(v.det().abs().is_one(), "V must be unimodular");
    let n = s.rows.min(s.cols);
    for i in 0..n {
        assert!(!s.at(i, i).is_negative(), "diagonal entries are nonnegative");
        for j in 0..s.cols {
            if j != i {
                assert!(s.at(i, j).is_zero(), "S is diagonal");
            }
        }
        if i + 1 < n && !s.at(i, i).is_zero() {
            let next = s.at(i + 1, i + 1);
            if !next.is_zero() {
                assert!((next % s.at(i, i)).is_zero(), "divisibility chain d_i | d_(i+1)");
            }
        }
    }
}

#[test]
fn snf_identity() {
    let a = IntMatrix::identity(3);
    let (u, s, v) = smith_normal_form(&a);
    assert_eq!(s, IntMatrix::identity(3));
    assert_eq!(u, IntMatrix::identity(3));
    assert_eq!(v, IntMatrix::identity(3));
}

#[test]
fn snf_zero() {
    let a = IntMatrix::zero(2, 2);
    let (u, s, v) = smith_normal_form(&a);
    assert_eq!(s, IntMatrix::zero(2, 2));
    assert_eq!(u, IntMatrix::identity(2));
    assert_eq!(v, IntMatrix::identity(2));
}

#[test]
fn snf_two_by_two() {
    let a = imat(&[&[2, 4], &[6, 8]]);
    let (_, s, _) = smith_normal_form(&a);
    assert_eq!(*s.at(0, 0), int(2));
    assert_eq!(*s.at(1, 1), int(4));
    check_snf(&a);
    // Determinant is invariant up to sign: |det A| = d1*d2.
    assert_eq!(a.det().abs(), int(8));
}

#[test]
fn rank_nullspace_identity() {
    let (rank, ns) = rank_and_nullspace(&RatMatrix::identity(2));
    assert_eq!(rank, 2);
    assert!(ns.is_empty());
}

#[test]
fn rank_nullspace_one_relation() {
    let (rank, ns) = rank_and_nullspace(&rmat(&[&[1, 1]]));
    assert_eq!(rank, 1);
    assert_eq!(ns, vec![vec![rat(1), rat(-1)]]);
}

#[test]
fn solve_identity() {
    let x = solve_linear(&RatMatrix::identity(2), &[rat(3), rat(5)]).unwrap().unwrap();
    assert_eq!(x, vec![rat(3), rat(5)]);
}

#[test]
fn solve_canonical_free_variable() {
    let x = solve_linear(&rmat(&[&[1, 1]]), &[rat(2)]).unwrap().unwrap();
    assert_eq!(x, vec![rat(2), rat(0)]);
}

#[test]
fn solve_inconsistent() {
    let x = solve_linear(&rmat(&[&[1], &[1]]), &[rat(1), rat(2)]).unwrap();
    assert!(x.is_none());
}

#[test]
fn solve_dimension_mismatch() {
    assert!(solve_linear(&rmat(&[&[1, 1]]), &[rat(1), rat(2)]).is_err());
}

#[test]
fn kernel_saturation_examples() {
    let k = kernel_saturation(&imat(&[&[1, 0]]));
    assert_eq!(k.rows_vec(), vec![vec![int(0), int(1)]]);

    let k = kernel_saturation(&imat(&[&[2, 4]]));
    assert_eq!(k.rows_vec(), vec![vec![int(2), int(-1)]]);

    let k = kernel_saturation(&IntMatrix::identity(2));
    assert_eq!(k.rows, 0);
}

#[test]
fn hnf_is_canonical() {
    // Two generating sets of the same lattice must give identical HNF rows.
    let a = hnf_rows(&[vec![int(2), int(1)], vec![int(0), int(3)]]);
    let b = hnf_rows(&[vec![int(2), int(4)], vec![int(2), int(7)], vec![int(4), int(5)]]);
    assert_eq!(a, b);
}

#[test]
fn primitive_from_rational_examples() {
    let v = primitive_from_rational(&[ratio(1, 2), ratio(-1, 3)]).unwrap();
    assert_eq!(v, vec![int(3), int(-2)]);
    assert!(primitive_from_rational(&[Rat::zero(), Rat::zero()]).is_none());
}

fn small_int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-9i64..=9, cols), rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_reconstructs(entries in small_int_matrix(4, 5)) {
        let a = imat(&entries.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
        check_snf(&a);
    }

    #[test]
    fn rank_plus_nullity(entries in small_int_matrix(5, 8)) {
        let rows: Vec<Vec<Rat>> =
            entries.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        let a = RatMatrix::from_rows(&rows);
        let (rank, ns) = rank_and_nullspace(&a);
        prop_assert_eq!(rank + ns.len(), 8);
        for v in &ns {
            for s in a.mul_vec(v) {
                prop_assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn solve_agrees_with_rank(entries in small_int_matrix(4, 4), bv in proptest::collection::vec(-9i64..=9, 4)) {
        let rows: Vec<Vec<Rat>> =
            entries.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        let a = RatMatrix::from_rows(&rows);
        let b: Vec<Rat> = bv.iter().map(|&x| rat(x)).collect();
        let (rank_a, _) = rank_and_nullspace(&a);
        let mut aug_rows = rows.clone();
        for (row, bi) in aug_rows.iter_mut().zip(&b) {
            row.push(bi.clone());
        }
        let (rank_aug, _) = rank_and_nullspace(&RatMatrix::from_rows(&aug_rows));
        let x = solve_linear(&a, &b).unwrap();
        // A x = b is solvable exactly when augmenting b does not raise the rank.
        prop_assert_eq!(x.is_some(), rank_a == rank_aug);
        if let Some(x) = x {
            let ax = a.mul_vec(&x);
            prop_assert_eq!(ax, b);
        }
    }

    #[test]
    fn saturated_kernel_annihilates(entries in small_int_matrix(3, 5)) {
        let a = imat(&entries.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
        let k = kernel_saturation(&a);
        for r in 0..k.rows {
            let v: Vec<Int> = k.row(r).to_vec();
            for s in a.mul_vec(&v) {
                prop_assert!(s.is_zero());
            }
        }
        // Saturation: the rational kernel has the same dimension.
        let (rank, _) = rank_and_nullspace(&a.to_rational());
        prop_assert_eq!(k.rows, 5 - rank);
    }
}
