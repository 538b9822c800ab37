//! Exact integer linear algebra: Smith normal form, lattice quotients, finite
//! abelian groups and the maps induced on them.
//!
//! Everything here is arbitrary precision; no floating point is used.

mod group;
mod matrix;
mod quotient;
mod snf;

pub use group::{torsion_elements, FinAbGroup, DEFAULT_ENUMERATION_CAP};
pub use matrix::IntMatrix;
pub use quotient::{
    finite_cokernel_order, induced_endomorphism, induced_free_map, induced_map, lattice_quotient, CokernelOrder,
    LatticeQuotient, TorsionMap,
};
pub use snf::{smith_normal_form, SnfDecomposition};

#[cfg(test)]
mod props {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::Signed;
    use proptest::prelude::*;

    use super::*;

    fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = IntMatrix> {
        (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
                .prop_map(move |rows| IntMatrix::from_rows(c, &rows))
        })
    }

    fn matrix_exact(r: usize, c: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, &rows))
    }

    fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec((0..n, 0..n, -2i64..=2), 0..8).prop_map(move |ops| {
            let mut m = IntMatrix::identity(n);
            for (a, b, k) in ops {
                if a != b {
                    m.add_row_multiple(a, b, &BigInt::from(k));
                }
            }
            m
        })
    }

    proptest! {
        #[test]
        fn snf_is_a_valid_decomposition(m in matrix(6, 6)) {
            let snf = smith_normal_form(&m);
            prop_assert_eq!(&(&snf.u * &m) * &snf.v, snf.d.clone());
            prop_assert!(snf.d.is_diagonal());
            prop_assert!(snf.u.is_unimodular());
            prop_assert!(snf.v.is_unimodular());
            let f = snf.invariant_factors();
            for w in f.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            prop_assert!(f.iter().all(|d| d.is_positive()));
        }

        #[test]
        fn snf_rank_matches_bareiss(m in matrix(6, 6)) {
            prop_assert_eq!(smith_normal_form(&m).rank(), m.rank());
        }

        #[test]
        fn square_quotient_order_is_det(m in (0usize..=4).prop_flat_map(|n| matrix_exact(n, n))) {
            let det = m.det();
            prop_assume!(det != BigInt::from(0));
            let q = lattice_quotient(m.cols(), &m);
            prop_assert_eq!(q.group().free_rank, 0);
            prop_assert_eq!(q.group().torsion_order(), det.abs());
        }

        #[test]
        fn induced_maps_compose(
            d in proptest::collection::vec(1i64..6, 3),
            p in unimodular(3),
            r in unimodular(3),
        ) {
            // Scalar-diagonal lattices are preserved by every integer matrix.
            let k = d.iter().product::<i64>();
            let rel = IntMatrix::scalar(3, &BigInt::from(k));
            let q = lattice_quotient(3, &rel);
            let fp = induced_endomorphism(&q, &p).unwrap();
            let fr = induced_endomorphism(&q, &r).unwrap();
            let fpr = induced_endomorphism(&q, &(&p * &r)).unwrap();
            prop_assert_eq!(fr.then(&fp), fpr);
        }
    }
}
