use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Whether `{x ≥ 0 : A x = b}` is nonempty, by phase one of the simplex
/// method with Bland's rule. Exact arithmetic throughout.
pub(crate) fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    // Tableau over [x | artificials | rhs], rows normalised to b ≥ 0.
    let width = cols + rows + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(rows + 1);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        let sign = if rhs.is_negative() { -BigRational::one() } else { BigRational::one() };
        let mut r = vec![BigRational::zero(); width];
        for (j, v) in row.iter().enumerate() {
            r[j] = v * &sign;
        }
        r[cols + i] = BigRational::one();
        r[width - 1] = rhs * &sign;
        t.push(r);
    }
    // Objective: minimise the sum of artificials, written as reduced costs.
    let mut obj = vec![BigRational::zero(); width];
    for r in &t {
        for j in 0..cols {
            obj[j] -= &r[j];
        }
        obj[width - 1] -= &r[width - 1];
    }
    let mut basis: Vec<usize> = (cols..cols + rows).collect();

    while let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else {
            // Unbounded below cannot happen for a sum of nonnegative terms.
            unreachable!("phase-one objective is bounded");
        };
        pivot(&mut t, &mut obj, p, enter);
        basis[p] = enter;
    }
    obj[width - 1].is_zero()
}

fn pivot(t: &mut [Vec<BigRational>], obj: &mut [BigRational], p: usize, q: usize) {
    let piv = t[p][q].clone();
    for v in t[p].iter_mut() {
        *v /= &piv;
    }
    let prow = t[p].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != p && !row[q].is_zero() {
            let f = row[q].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
    }
    if !obj[q].is_zero() {
        let f = obj[q].clone();
        for (v, pv) in obj.iter_mut().zip(&prow) {
            *v -= &f * pv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn small_systems() {
        // x + y = 1, x - y = 3 → x = 2, y = -1: infeasible for x, y ≥ 0.
        assert!(!feasible(&[vec![r(1), r(1)], vec![r(1), r(-1)]], &[r(1), r(3)]));
        // x + y = 3, x - y = 1 → (2, 1).
        assert!(feasible(&[vec![r(1), r(1)], vec![r(1), r(-1)]], &[r(3), r(1)]));
        // Redundant rows.
        assert!(feasible(&[vec![r(1), r(1)], vec![r(2), r(2)]], &[r(1), r(2)]));
        assert!(!feasible(&[vec![r(1), r(1)], vec![r(2), r(2)]], &[r(1), r(3)]));
        assert!(feasible(&[], &[]));
    }
}
