use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::TorusSpec;
use crate::error::{Error, Result};

/// Bound on `|M|`, keeping weighted conductor sums inside `i64`.
pub const MAX_TOTAL_MULTIPLICITY: u64 = 1 << 32;

/// The multiset `M` of coweights of the representation, stored as distinct
/// vectors with multiplicities, together with the permutation each group
/// element induces on the distinct vectors.
#[derive(Clone, Debug)]
pub struct CoweightSystem {
    distinct: Vec<Vec<BigInt>>,
    multiplicity: Vec<u64>,
    /// `action[g][i] = j` when the matrix of `g` sends coweight `i` to `j`.
    action: Vec<Vec<usize>>,
}

impl CoweightSystem {
    pub fn new(spec: &TorusSpec, coweights: Vec<(Vec<BigInt>, u64)>) -> Result<Self> {
        let n = spec.dim();
        let mut lookup = HashMap::new();
        let mut distinct = Vec::with_capacity(coweights.len());
        let mut multiplicity = Vec::with_capacity(coweights.len());
        for (i, (v, mult)) in coweights.into_iter().enumerate() {
            if v.len() != n {
                return Err(Error::schema(
                    format!("coweights[{i}].vector"),
                    format!("expected {n} entries, got {}", v.len()),
                ));
            }
            if mult == 0 {
                return Err(Error::invalid(format!("coweights[{i}].multiplicity"), "multiplicity must be positive"));
            }
            if lookup.insert(v.clone(), i).is_some() {
                return Err(Error::invalid(format!("coweights[{i}].vector"), "duplicate coweight"));
            }
            distinct.push(v);
            multiplicity.push(mult);
        }
        if distinct.is_empty() {
            return Err(Error::invalid("coweights", "at least one coweight is required"));
        }
        let total = multiplicity.iter().try_fold(0u64, |acc, &m| acc.checked_add(m));
        if total.is_none_or(|t| t > MAX_TOTAL_MULTIPLICITY) {
            return Err(Error::TooLarge(format!("total multiplicity exceeds {MAX_TOTAL_MULTIPLICITY}")));
        }

        let permutation = |m: &crate::linalg::IntMatrix| -> Option<Vec<usize>> {
            distinct
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let j = *lookup.get(&m.apply(v))?;
                    (multiplicity[j] == multiplicity[i]).then_some(j)
                })
                .collect()
        };
        for (gi, g) in spec.generators().iter().enumerate() {
            if permutation(g).is_none() {
                return Err(Error::NotGaloisStable { field: format!("generators[{gi}]") });
            }
        }
        let action = spec
            .elements()
            .iter()
            .map(|e| permutation(&e.matrix).expect("closure of stabilising generators"))
            .collect();
        Ok(CoweightSystem { distinct, multiplicity, action })
    }

    pub fn distinct(&self) -> &[Vec<BigInt>] {
        &self.distinct
    }

    pub fn multiplicity(&self) -> &[u64] {
        &self.multiplicity
    }

    pub fn distinct_count(&self) -> usize {
        self.distinct.len()
    }

    /// Total size `m` counted with multiplicity.
    pub fn total(&self) -> u64 {
        self.multiplicity.iter().sum()
    }

    pub fn permutation(&self, g: usize) -> &[usize] {
        &self.action[g]
    }

    /// Bit mask with every distinct coweight set.
    pub fn full_mask(&self) -> u64 {
        if self.distinct.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.distinct.len()) - 1
        }
    }

    pub fn full(&self) -> SubMultiset {
        SubMultiset { counts: self.multiplicity.clone() }
    }

    pub fn empty(&self) -> SubMultiset {
        SubMultiset { counts: vec![0; self.distinct.len()] }
    }

    /// Image of `s` under group element `g`.
    pub fn act(&self, g: usize, s: &SubMultiset) -> SubMultiset {
        let perm = &self.action[g];
        let mut counts = vec![0; s.counts.len()];
        for (i, &c) in s.counts.iter().enumerate() {
            counts[perm[i]] = c;
        }
        SubMultiset { counts }
    }

    /// Permutation of the distinct coweights that preserves a mask bitwise.
    pub fn act_on_mask(&self, g: usize, mask: u64) -> u64 {
        let perm = &self.action[g];
        (0..self.distinct.len()).filter(|&i| mask >> i & 1 == 1).fold(0, |acc, i| acc | 1 << perm[i])
    }
}

/// A sub-multiset `S ⊆ M`, one count per distinct coweight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SubMultiset {
    pub counts: Vec<u64>,
}

impl SubMultiset {
    pub fn new(counts: Vec<u64>) -> Self {
        SubMultiset { counts }
    }

    pub fn size(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn is_valid_for(&self, system: &CoweightSystem) -> bool {
        self.counts.len() == system.distinct_count()
            && self.counts.iter().zip(system.multiplicity()).all(|(c, m)| c <= m)
    }

    /// Distinct coweights not fully contained in `S`; their kernels cut out
    /// `D(S)`.
    pub fn complement_mask(&self, system: &CoweightSystem) -> u64 {
        self.counts
            .iter()
            .zip(system.multiplicity())
            .enumerate()
            .filter(|(_, (c, m))| c < m)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Coordinatewise `self ≤ other`.
    pub fn is_subset_of(&self, other: &SubMultiset) -> bool {
        self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    /// Sub-multiset containing the coweights outside `mask` fully and nothing
    /// else; the smallest `S` whose complement support is `mask`.
    pub fn minimal_for_mask(system: &CoweightSystem, mask: u64) -> SubMultiset {
        let counts =
            system.multiplicity().iter().enumerate().map(|(i, &m)| if mask >> i & 1 == 1 { 0 } else { m }).collect();
        SubMultiset { counts }
    }
}

impl fmt::Display for SubMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntMatrix;

    fn vecs(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn unstable_multiset_rejected() {
        let swap = IntMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]]);
        let spec = TorusSpec::new(2, vec![swap], 10).unwrap();
        let err = CoweightSystem::new(&spec, vec![(vecs(&[1, 0]), 1)]).unwrap_err();
        assert!(matches!(err, Error::NotGaloisStable { .. }));
        // Multiplicities must match along orbits too.
        let err = CoweightSystem::new(&spec, vec![(vecs(&[1, 0]), 1), (vecs(&[0, 1]), 2)]).unwrap_err();
        assert!(matches!(err, Error::NotGaloisStable { .. }));
        let ok = CoweightSystem::new(&spec, vec![(vecs(&[1, 0]), 1), (vecs(&[0, 1]), 1)]).unwrap();
        assert_eq!(ok.permutation(1), &[1, 0]);
    }

    #[test]
    fn masks_and_sizes() {
        let spec = TorusSpec::new(1, vec![], 10).unwrap();
        let sys = CoweightSystem::new(&spec, vec![(vecs(&[2]), 1), (vecs(&[3]), 3)]).unwrap();
        assert_eq!(sys.total(), 4);
        let s = SubMultiset::new(vec![1, 2]);
        assert_eq!(s.size(), 3);
        assert_eq!(s.complement_mask(&sys), 0b10);
        assert_eq!(SubMultiset::minimal_for_mask(&sys, 0b10), SubMultiset::new(vec![1, 0]));
        assert_eq!(sys.full().complement_mask(&sys), 0);
        assert_eq!(sys.empty().complement_mask(&sys), 0b11);
    }
}
