//! The torus, its coweight multiset, and the invariants read off from the
//! diagonalizable groups `D(S)`: faithfulness, the exponent `A`, the set `Σ`
//! and its strata, `λ`, and the convergence abscissae.

mod coweights;
mod group;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use coweights::{CoweightSystem, SubMultiset, MAX_TOTAL_MULTIPLICITY};
pub use group::{GroupElement, TorusSpec, MAX_DIM};

use crate::error::{Error, Result};
use crate::linalg::{lattice_quotient, FinAbGroup, IntMatrix, LatticeQuotient};

/// Enumeration guards shared by the analyses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub distinct_cap: usize,
    pub group_cap: usize,
    pub enumeration_cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { distinct_cap: 20, group_cap: 10_000, enumeration_cap: 1_000_000 }
    }
}

/// `D = ∩ ker μ` over the defining rows, with character group `Z^n / L`.
#[derive(Clone, Debug)]
pub struct DiagGroup {
    pub defining_rows: IntMatrix,
    pub quotient: LatticeQuotient,
    pub dimension: usize,
    pub pi0: FinAbGroup,
}

impl DiagGroup {
    pub fn new(ambient_rank: usize, defining_rows: IntMatrix) -> Self {
        let quotient = lattice_quotient(ambient_rank, &defining_rows);
        let pi0 = FinAbGroup { invariant_factors: quotient.group().invariant_factors.clone(), free_rank: 0 };
        DiagGroup { dimension: quotient.group().free_rank, pi0, quotient, defining_rows }
    }

    /// `D = {1}`.
    pub fn is_trivial(&self) -> bool {
        self.dimension == 0 && self.pi0.invariant_factors.is_empty()
    }

    pub fn component_count(&self) -> BigInt {
        self.pi0.torsion_order()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbscissaVariant {
    /// Maximum of `dim D(S)/|S|` over `D(S) ≠ {1}`.
    Ramified,
    /// Maximum of `dim D(S)/|S|` over `dim D(S) ≥ 1`.
    Archimedean,
}

/// A validated torus with its coweight system; caches `D(S)` per complement
/// support.
#[derive(Debug)]
pub struct Torus {
    spec: TorusSpec,
    coweights: CoweightSystem,
    limits: Limits,
    diag_cache: RwLock<HashMap<u64, Arc<DiagGroup>>>,
}

impl Torus {
    pub fn new(spec: TorusSpec, coweights: CoweightSystem, limits: Limits) -> Result<Self> {
        if coweights.distinct_count() > limits.distinct_cap.min(63) {
            return Err(Error::EnumerationCap {
                what: "distinct coweights".into(),
                needed: coweights.distinct_count().to_string(),
                cap: limits.distinct_cap.min(63).to_string(),
            });
        }
        Ok(Torus { spec, coweights, limits, diag_cache: RwLock::new(HashMap::new()) })
    }

    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    pub fn coweights(&self) -> &CoweightSystem {
        &self.coweights
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    fn all_masks(&self) -> impl Iterator<Item = u64> {
        0..=self.coweights.full_mask()
    }

    /// `∩ ker μ` over the distinct coweights in `mask`.
    pub fn diag_group_for_mask(&self, mask: u64) -> Arc<DiagGroup> {
        if let Some(d) = self.diag_cache.read().expect("cache poisoned").get(&mask) {
            return Arc::clone(d);
        }
        let rows: Vec<Vec<BigInt>> = self
            .coweights
            .distinct()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, v)| v.clone())
            .collect();
        let d = Arc::new(DiagGroup::new(self.dim(), IntMatrix::from_big_rows(self.dim(), &rows)));
        self.diag_cache.write().expect("cache poisoned").insert(mask, Arc::clone(&d));
        d
    }

    /// `D(S)`; depends only on the complement support of `S`.
    pub fn diag_group(&self, s: &SubMultiset) -> Arc<DiagGroup> {
        self.diag_group_for_mask(s.complement_mask(&self.coweights))
    }

    pub fn is_faithful(&self) -> bool {
        self.diag_group_for_mask(self.coweights.full_mask()).is_trivial()
    }

    fn require_faithful(&self) -> Result<()> {
        if self.is_faithful() {
            Ok(())
        } else {
            Err(Error::NotFaithful)
        }
    }

    /// Complement supports other than the full one, paired with the size of
    /// the smallest `S` having that support.
    fn proper_masks(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let full = self.coweights.full_mask();
        self.all_masks()
            .filter(move |&m| m != full)
            .map(move |m| (m, SubMultiset::minimal_for_mask(&self.coweights, m).size()))
    }

    /// `A = max (dim D(S) + 1)/|S|` over nonempty `S` with `D(S) ≠ {1}`,
    /// with the lexicographically smallest maximizing count vector.
    pub fn invariant_a(&self) -> Result<(BigRational, SubMultiset)> {
        self.require_faithful()?;
        // For a fixed complement support the ratio is largest at the smallest
        // S, so only minimal sub-multisets can attain the maximum.
        let mut best: Option<(BigRational, SubMultiset)> = None;
        for (mask, size) in self.proper_masks() {
            let d = self.diag_group_for_mask(mask);
            if d.is_trivial() {
                continue;
            }
            let ratio = BigRational::new(BigInt::from(d.dimension + 1), BigInt::from(size));
            let s = SubMultiset::minimal_for_mask(&self.coweights, mask);
            let replace = match &best {
                None => true,
                Some((r, w)) => ratio > *r || (ratio == *r && s < *w),
            };
            if replace {
                best = Some((ratio, s));
            }
        }
        // Faithful with a nonempty multiset means D(M) = T̂ has dimension n ≥ 1.
        best.ok_or_else(|| Error::Internal("no S with D(S) nontrivial".into()))
    }

    /// `Σ`: every nonempty `S` with `(dim D(S) + 1)/|S| = A`, including those
    /// with `D(S) = {1}`. Sorted by size, then count vector.
    pub fn sigma_set(&self) -> Result<Vec<SubMultiset>> {
        let (a, _) = self.invariant_a()?;
        let mut out = Vec::new();
        let mut budget = self.limits.enumeration_cap;
        for mask in self.all_masks() {
            let d = self.diag_group_for_mask(mask);
            // |S| = (dim + 1) / A must be a positive integer.
            let b = BigRational::from_integer(BigInt::from(d.dimension + 1)) / &a;
            if !b.is_integer() {
                continue;
            }
            let b: u64 = b.to_integer().try_into().map_err(|_| Error::Internal("|S| overflow".into()))?;
            enumerate_with_support(&self.coweights, mask, b, &mut budget, &mut out)?;
        }
        out.sort_by(|x, y| x.size().cmp(&y.size()).then_with(|| x.cmp(y)));
        Ok(out)
    }

    /// `λ = lcm |π₀(D(S))|` over all sub-multisets.
    pub fn lambda(&self) -> BigInt {
        self.all_masks()
            .map(|m| self.diag_group_for_mask(m).component_count())
            .fold(BigInt::one(), |acc, k| acc.lcm(&k))
    }

    /// `Σ` partitioned by `(dim D(S), |S|)`.
    pub fn strata(&self) -> Result<BTreeMap<(usize, u64), Vec<SubMultiset>>> {
        let mut out: BTreeMap<(usize, u64), Vec<SubMultiset>> = BTreeMap::new();
        for s in self.sigma_set()? {
            let a = self.diag_group(&s).dimension;
            out.entry((a, s.size())).or_default().push(s);
        }
        Ok(out)
    }

    pub fn abscissa(&self, variant: AbscissaVariant) -> Result<BigRational> {
        self.require_faithful()?;
        let mut best = BigRational::zero();
        for (mask, size) in self.proper_masks() {
            let d = self.diag_group_for_mask(mask);
            let admissible = match variant {
                AbscissaVariant::Ramified => !d.is_trivial(),
                AbscissaVariant::Archimedean => d.dimension >= 1,
            };
            if !admissible {
                continue;
            }
            let r = BigRational::new(BigInt::from(d.dimension), BigInt::from(size));
            if r > best {
                best = r;
            }
        }
        Ok(best)
    }
}

/// Pushes every `S` of total size `b` whose complement support is exactly
/// `mask`: full counts off the mask, counts below the multiplicity on it.
fn enumerate_with_support(
    system: &CoweightSystem,
    mask: u64,
    b: u64,
    budget: &mut u64,
    out: &mut Vec<SubMultiset>,
) -> Result<()> {
    let base = SubMultiset::minimal_for_mask(system, mask);
    let fixed = base.size();
    if b < fixed || b == 0 {
        return Ok(());
    }
    let free: Vec<usize> = (0..system.distinct_count()).filter(|i| mask >> i & 1 == 1).collect();
    let caps: Vec<u64> = free.iter().map(|&i| system.multiplicity()[i] - 1).collect();
    let mut counts = base.counts.clone();

    fn rec(
        k: usize,
        remaining: u64,
        free: &[usize],
        caps: &[u64],
        counts: &mut Vec<u64>,
        budget: &mut u64,
        out: &mut Vec<SubMultiset>,
    ) -> Result<()> {
        if k == free.len() {
            if remaining == 0 {
                if *budget == 0 {
                    return Err(Error::EnumerationCap {
                        what: "sub-multisets".into(),
                        needed: "more".into(),
                        cap: "enumeration cap".into(),
                    });
                }
                *budget -= 1;
                out.push(SubMultiset::new(counts.clone()));
            }
            return Ok(());
        }
        let tail: u64 = caps[k + 1..].iter().sum();
        let lo = remaining.saturating_sub(tail);
        let hi = caps[k].min(remaining);
        for c in lo..=hi {
            counts[free[k]] = c;
            rec(k + 1, remaining - c, free, caps, counts, budget, out)?;
        }
        counts[free[k]] = 0;
        Ok(())
    }

    if caps.iter().sum::<u64>() < b - fixed {
        return Ok(());
    }
    rec(0, b - fixed, &free, &caps, &mut counts, budget, out)
}
