//! Smith normal form over the integers.
//!
//! Elementary row and column operations with the pivot chosen as the entry of
//! least absolute value in the active block. The column transform is tracked
//! together with its inverse so that lattice quotients can map coordinates
//! back to representatives without a separate inversion.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `u · source · v = d` with `u`, `v` unimodular and `d` diagonal.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`.
    pub v_inv: IntMatrix,
    pub source: IntMatrix,
}

impl SnfDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let k = self.d.rows().min(self.d.cols());
        (0..k).take_while(|&i| !self.d[(i, i)].is_zero()).count()
    }

    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank()).map(|i| self.d[(i, i)].clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = min_abs_entry(&d, t) else {
                return finish(u, d, v, v_inv, m);
            };
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);
            v_inv.swap_rows(t, pc);

            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                // V ← V·E with E = I + q·e_t e_jᵀ, so V⁻¹ ← E⁻¹·V⁻¹.
                v_inv.add_row_multiple(t, j, &-&q);
                dirty |= !d[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column are clear; the pivot must divide the rest.
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v, v_inv, m)
}

fn finish(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix, v_inv: IntMatrix, source: &IntMatrix) -> SnfDecomposition {
    for t in 0..d.rows().min(d.cols()) {
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfDecomposition { u, d, v, v_inv, source: source.clone() }
}

fn min_abs_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let e = &d[(i, j)];
            if e.is_zero() {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => e.abs() < d[(bi, bj)].abs(),
            };
            if better {
                best = Some((i, j));
                if e.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(rows: &[Vec<i64>], cols: usize) -> Vec<i64> {
        let snf = smith_normal_form(&IntMatrix::from_rows(cols, rows));
        check(&snf);
        snf.invariant_factors().iter().map(|f| f.try_into().unwrap()).collect()
    }

    fn check(snf: &SnfDecomposition) {
        assert_eq!(&(&snf.u * &snf.source) * &snf.v, snf.d);
        assert!(snf.d.is_diagonal());
        assert!(snf.u.is_unimodular());
        assert!(snf.v.is_unimodular());
        assert_eq!(&snf.v * &snf.v_inv, IntMatrix::identity(snf.v.rows()));
        let f = snf.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn identity_is_fixed() {
        let snf = smith_normal_form(&IntMatrix::identity(2));
        assert_eq!(snf.d, IntMatrix::identity(2));
        assert_eq!(snf.u, IntMatrix::identity(2));
        assert_eq!(snf.v, IntMatrix::identity(2));
    }

    #[test]
    fn coprime_column() {
        assert_eq!(factors(&[vec![2], vec![3]], 1), vec![1]);
    }

    #[test]
    fn diagonal_two_three() {
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]], 2), vec![1, 6]);
    }

    #[test]
    fn rank_deficient_and_empty() {
        assert_eq!(factors(&[vec![2, 4], vec![3, 6]], 2), vec![1]);
        assert!(factors(&[], 3).is_empty());
        let snf = smith_normal_form(&IntMatrix::zeros(2, 0));
        check(&snf);
        assert_eq!(snf.rank(), 0);
    }

    #[test]
    fn divisibility_fixup_needed() {
        // diag(4, 6) has invariant factors 2, 12.
        assert_eq!(factors(&[vec![4, 0], vec![0, 6]], 2), vec![2, 12]);
    }
}
