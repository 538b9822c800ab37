use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the number of elements produced by [`FinAbGroup::elements`].
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Finitely generated abelian group `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with
/// `d_i ≥ 2` and `d_i | d_{i+1}`. Elements are tuples of torsion residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup { invariant_factors: Vec::new(), free_rank: 0 }
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn identity(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.invariant_factors.len()]
    }

    /// Reduces a coordinate tuple into canonical residues.
    pub fn normalize(&self, y: &mut [BigInt]) {
        for (yi, d) in y.iter_mut().zip(&self.invariant_factors) {
            *yi = num_integer::Integer::mod_floor(&*yi, d);
        }
    }

    pub fn contains(&self, y: &[BigInt]) -> bool {
        y.len() == self.invariant_factors.len()
            && y.iter().zip(&self.invariant_factors).all(|(yi, d)| !yi.is_negative() && yi < d)
    }

    /// All torsion elements in lexicographic order of residues.
    pub fn elements(&self, cap: u64) -> Result<Vec<Vec<BigInt>>> {
        let order = self.torsion_order();
        if order > BigInt::from(cap) {
            return Err(Error::EnumerationCap {
                what: "torsion elements".into(),
                needed: order.to_string(),
                cap: cap.to_string(),
            });
        }
        let factors: Vec<u64> = self.invariant_factors.iter().map(|d| d.to_u64().expect("bounded by cap")).collect();
        let total = order.to_u64().expect("bounded by cap");
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = vec![0u64; factors.len()];
        for _ in 0..total {
            out.push(cur.iter().map(|&c| BigInt::from(c)).collect());
            for k in (0..factors.len()).rev() {
                cur[k] += 1;
                if cur[k] < factors[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
        Ok(out)
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut s: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.normalize(&mut s);
        s
    }

    pub fn scale(&self, a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
        let mut s: Vec<BigInt> = a.iter().map(|x| x * k).collect();
        self.normalize(&mut s);
        s
    }

    /// Exponent of the torsion subgroup (the largest invariant factor).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }
}

/// Enumerates torsion elements with the default cap.
pub fn torsion_elements(g: &FinAbGroup) -> Result<Vec<Vec<BigInt>>> {
    g.elements(DEFAULT_ENUMERATION_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(f: &[i64]) -> FinAbGroup {
        FinAbGroup { invariant_factors: f.iter().map(|&d| BigInt::from(d)).collect(), free_rank: 0 }
    }

    #[test]
    fn enumerations() {
        assert_eq!(torsion_elements(&group(&[])).unwrap(), vec![Vec::<BigInt>::new()]);
        assert_eq!(torsion_elements(&group(&[3])).unwrap().len(), 3);
        let els = torsion_elements(&group(&[2, 6])).unwrap();
        assert_eq!(els.len(), 12);
        let mut dedup = els.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 12);
    }

    #[test]
    fn cap_is_enforced() {
        let err = group(&[1000, 1000]).elements(10_000).unwrap_err();
        assert!(matches!(err, Error::EnumerationCap { .. }));
    }

    #[test]
    fn arithmetic_wraps() {
        let g = group(&[2, 6]);
        let a = vec![BigInt::from(1), BigInt::from(5)];
        assert_eq!(g.add(&a, &a), vec![BigInt::from(0), BigInt::from(4)]);
        assert!(g.contains(&g.scale(&a, &BigInt::from(-7))));
    }
}
