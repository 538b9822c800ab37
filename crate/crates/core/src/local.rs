//! Unramified local computations at a place with residue field of size `q`
//! and Frobenius `Fr ∈ G`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    finite_cokernel_order, induced_endomorphism, induced_free_map, lattice_quotient, CokernelOrder, IntMatrix,
};
use crate::torus::{DiagGroup, SubMultiset, Torus};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalData {
    pub q: u64,
    pub p: u64,
    pub frobenius: usize,
    /// Order of the Frobenius in `G`.
    pub f: usize,
}

/// Largest supported residue field size; keeps trial division cheap.
pub const MAX_Q: u64 = 1 << 40;

impl LocalData {
    /// Validates that `q` is a prime power coprime to `λ` and evaluates the
    /// Frobenius word.
    pub fn new(torus: &Torus, q: u64, frobenius_word: &[usize]) -> Result<Self> {
        if q > MAX_Q {
            return Err(Error::invalid("q", format!("{q} exceeds {MAX_Q}")));
        }
        let p = prime_of_prime_power(q).ok_or_else(|| Error::invalid("q", format!("{q} is not a prime power")))?;
        let lambda = torus.lambda();
        if !BigInt::from(q).gcd(&lambda).is_one() {
            return Err(Error::NotCoprime { q, lambda: lambda.to_u64().unwrap_or(u64::MAX) });
        }
        let frobenius = torus.spec().evaluate_word(frobenius_word).map_err(|e| match e {
            Error::Invalid { field, message } => Error::invalid(format!("frobenius.{field}"), message),
            other => other,
        })?;
        Ok(LocalData { q, p, frobenius, f: torus.spec().element_order(frobenius) })
    }
}

fn prime_of_prime_power(q: u64) -> Option<u64> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    (r == 1).then_some(p)
}

/// A conductor exponent per distinct coweight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConductorVector {
    pub entries: Vec<i64>,
}

impl ConductorVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ConductorVector { entries }
    }

    /// `Σ multiplicity(μ)·c_μ`.
    pub fn weighted_size(&self, torus: &Torus) -> i64 {
        self.entries.iter().zip(torus.coweights().multiplicity()).map(|(&c, &m)| c * m as i64).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerFactorTruncation {
    /// Coefficient of `q^{-se}` for `e = 0..=cap`.
    pub coefficients: BTreeMap<u64, BigInt>,
    pub cap: u64,
}

/// Local computations for one torus and one place.
pub struct LocalFactors<'a> {
    torus: &'a Torus,
    local: LocalData,
}

impl<'a> LocalFactors<'a> {
    pub fn new(torus: &'a Torus, local: LocalData) -> Self {
        LocalFactors { torus, local }
    }

    pub fn local(&self) -> &LocalData {
        &self.local
    }

    fn frobenius_matrix(&self) -> &IntMatrix {
        self.torus.spec().matrix(self.local.frobenius)
    }

    fn q_big(&self) -> BigInt {
        BigInt::from(self.local.q)
    }

    /// `|Hom_G(ℓ^×, D)|`: the order of the cokernel of `χ ↦ qχ − Fr χ` on
    /// `X^*(D)`.
    pub fn hom_count(&self, d: &DiagGroup) -> Result<BigInt> {
        let p = self.frobenius_matrix();
        induced_endomorphism(&d.quotient, p)?;
        let n = self.torus.dim();
        let phi = IntMatrix::scalar(n, &self.q_big()).sub(p);
        match finite_cokernel_order(n, &d.defining_rows.vstack(&phi.transpose())) {
            CokernelOrder::Finite(k) => Ok(k),
            CokernelOrder::Infinite => Err(Error::Internal("infinite cokernel in hom count".into())),
        }
    }

    /// The same count by enumerating `D[q^f − 1]` and testing `Fr z = z^q`.
    pub fn hom_count_oracle(&self, d: &DiagGroup) -> Result<BigInt> {
        let n = self.torus.dim();
        let big_n = BigInt::from(self.local.q).pow(self.local.f as u32) - 1u32;
        let rel = d.defining_rows.vstack(&IntMatrix::scalar(n, &big_n));
        let qn = lattice_quotient(n, &rel);
        let e = induced_endomorphism(&qn, self.frobenius_matrix())?.minus_scalar(&self.q_big());
        let factors = &qn.group().invariant_factors;
        let top = qn.group().exponent();
        // A character z of order dividing N is a map ψ: X^*(D)/N → Z/N; with
        // ψ(e_i) = a_i·(top/d_i) up to the common factor N/top, the condition
        // ψ ∘ (Fr − q) = 0 reads Σ_i a_i (E − q)_{ij} (top/d_i) ≡ 0 mod top.
        let scales: Vec<BigInt> = factors.iter().map(|d| &top / d).collect();
        let mut count = BigInt::zero();
        for a in qn.group().elements(self.torus.limits().enumeration_cap)? {
            let ok = (0..factors.len()).all(|j| {
                let img = e.apply(&unit_vector(factors.len(), j));
                let s: BigInt = (0..factors.len()).map(|i| &a[i] * &img[i] * &scales[i]).sum();
                s.is_multiple_of(&top)
            });
            if ok {
                count += 1;
            }
        }
        Ok(count)
    }

    /// `a(S)`: torsion characters `y` of `D(S)` with `q·y = Fr y`.
    pub fn a_count(&self, s: &SubMultiset) -> Result<BigInt> {
        let d = self.torus.diag_group(s);
        self.a_count_for(&d)
    }

    fn a_count_for(&self, d: &DiagGroup) -> Result<BigInt> {
        let phi = induced_endomorphism(&d.quotient, self.frobenius_matrix())?.minus_scalar(&self.q_big());
        let g = d.quotient.group();
        let mut count = BigInt::zero();
        for y in g.elements(self.torus.limits().enumeration_cap)? {
            if phi.apply(&y).iter().all(Zero::is_zero) {
                count += 1;
            }
        }
        Ok(count)
    }

    /// `|det(q − Fr)|` on the free quotient of `X^*(D)`.
    pub fn free_part_order(&self, d: &DiagGroup) -> Result<BigInt> {
        let a = induced_free_map(&d.quotient, self.frobenius_matrix())?;
        let k = a.rows();
        Ok(IntMatrix::scalar(k, &self.q_big()).sub(&a).det().abs())
    }

    /// Checks `hom_count = a_count · free_part_order` for `D(S)`.
    pub fn check_free_part(&self, s: &SubMultiset) -> Result<bool> {
        let d = self.torus.diag_group(s);
        Ok(self.hom_count(&d)? == self.a_count_for(&d)? * self.free_part_order(&d)?)
    }

    pub fn is_frobenius_fixed(&self, c: &ConductorVector) -> bool {
        let perm = self.torus.coweights().permutation(self.local.frobenius);
        (0..c.entries.len()).all(|i| c.entries[perm[i]] == c.entries[i])
    }

    fn check_shape(&self, c: &ConductorVector) -> Result<()> {
        let k = self.torus.coweights().distinct_count();
        if c.entries.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "conductor vector has {} entries, expected {k}",
                c.entries.len()
            )));
        }
        Ok(())
    }

    /// Largest Frobenius-fixed vector below `c`.
    fn fixed_floor(&self, c: &ConductorVector) -> ConductorVector {
        let perm = self.torus.coweights().permutation(self.local.frobenius);
        let mut out = c.entries.clone();
        for (i, slot) in out.iter_mut().enumerate() {
            let mut j = perm[i];
            while j != i {
                *slot = (*slot).min(c.entries[j]);
                j = perm[j];
            }
        }
        ConductorVector::new(out)
    }

    /// `Π_≤(c)`: parameters whose conductor is at most `c`.
    pub fn pi_leq(&self, c: &ConductorVector) -> Result<BigInt> {
        self.check_shape(c)?;
        if !self.is_frobenius_fixed(c) {
            return Err(Error::NotFrobeniusFixed);
        }
        self.pi_leq_fixed(c)
    }

    fn pi_leq_fixed(&self, c: &ConductorVector) -> Result<BigInt> {
        if !self.torus.is_faithful() {
            return Err(Error::NotFaithful);
        }
        if c.entries.iter().any(|&x| x < 0) {
            return Ok(BigInt::zero());
        }
        let mask_at =
            |k: i64| c.entries.iter().enumerate().filter(|(_, &x)| x <= k).fold(0u64, |acc, (i, _)| acc | 1 << i);
        let mut total = self.hom_count(&self.torus.diag_group_for_mask(mask_at(0)))?;
        let top = c.entries.iter().copied().max().unwrap_or(0);
        // D_k is trivial from k = max c on, by faithfulness.
        for k in 1..top {
            let dim = self.torus.diag_group_for_mask(mask_at(k)).dimension;
            total *= self.q_big().pow(dim as u32);
        }
        Ok(total)
    }

    /// `Π_=(c)` by inclusion-exclusion over one decrement per distinct
    /// coweight; zero when `c` is not Frobenius-fixed.
    pub fn pi_eq(&self, c: &ConductorVector) -> Result<BigInt> {
        self.check_shape(c)?;
        if !self.is_frobenius_fixed(c) {
            return Ok(BigInt::zero());
        }
        let k = c.entries.len();
        let mut total = BigInt::zero();
        for b in 0u64..1 << k {
            let shifted =
                ConductorVector::new(c.entries.iter().enumerate().map(|(i, &x)| x - (b >> i & 1) as i64).collect());
            let term = self.pi_leq_fixed(&self.fixed_floor(&shifted))?;
            if b.count_ones() % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        Ok(total)
    }

    /// Coefficients of the local factor up to weighted conductor `cap`.
    pub fn local_factor(&self, cap: u64) -> Result<EulerFactorTruncation> {
        if !self.torus.is_faithful() {
            return Err(Error::NotFaithful);
        }
        let limit = self.torus.limits().enumeration_cap;
        if cap >= limit {
            return Err(Error::EnumerationCap {
                what: "local factor coefficients".into(),
                needed: (u128::from(cap) + 1).to_string(),
                cap: limit.to_string(),
            });
        }
        let orbits = self.frobenius_orbits();
        let mults = self.torus.coweights().multiplicity();
        let weights: Vec<u64> = orbits.iter().map(|o| o.iter().map(|&i| mults[i]).sum()).collect();
        let mut coefficients: BTreeMap<u64, BigInt> = (0..=cap).map(|e| (e, BigInt::zero())).collect();
        let mut budget = self.torus.limits().enumeration_cap;
        let mut values = vec![0u64; orbits.len()];
        self.accumulate(&orbits, &weights, 0, 0, cap, &mut values, &mut budget, &mut coefficients)?;
        Ok(EulerFactorTruncation { coefficients, cap })
    }

    #[allow(clippy::too_many_arguments)]
    fn accumulate(
        &self,
        orbits: &[Vec<usize>],
        weights: &[u64],
        k: usize,
        used: u64,
        cap: u64,
        values: &mut Vec<u64>,
        budget: &mut u64,
        out: &mut BTreeMap<u64, BigInt>,
    ) -> Result<()> {
        if k == orbits.len() {
            if *budget == 0 {
                return Err(Error::EnumerationCap {
                    what: "conductor vectors".into(),
                    needed: "more".into(),
                    cap: self.torus.limits().enumeration_cap.to_string(),
                });
            }
            *budget -= 1;
            let mut entries = vec![0i64; self.torus.coweights().distinct_count()];
            for (orbit, &v) in orbits.iter().zip(values.iter()) {
                for &i in orbit {
                    entries[i] = v as i64;
                }
            }
            *out.get_mut(&used).expect("within cap") += self.pi_eq(&ConductorVector::new(entries))?;
            return Ok(());
        }
        let mut v = 0;
        while used + v * weights[k] <= cap {
            values[k] = v;
            self.accumulate(orbits, weights, k + 1, used + v * weights[k], cap, values, budget, out)?;
            v += 1;
        }
        values[k] = 0;
        Ok(())
    }

    /// Orbits of `⟨Fr⟩` on the distinct coweights, each sorted, ordered by
    /// smallest member.
    fn frobenius_orbits(&self) -> Vec<Vec<usize>> {
        let perm = self.torus.coweights().permutation(self.local.frobenius);
        let mut seen = vec![false; perm.len()];
        let mut out = Vec::new();
        for i in 0..perm.len() {
            if seen[i] {
                continue;
            }
            let mut orbit = vec![i];
            seen[i] = true;
            let mut j = perm[i];
            while j != i {
                seen[j] = true;
                orbit.push(j);
                j = perm[j];
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }
}

fn unit_vector(k: usize, j: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); k];
    e[j] = BigInt::one();
    e
}
