//! Linear matroids over `Q`, the base-polytope minimum `B_∞` with a bias
//! certificate, and an independent polytope-feasibility oracle.

mod simplex;

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Largest ground set enumerated by subset search.
pub const MAX_GROUND: usize = 24;
/// Largest ground set accepted by the feasibility oracle.
pub const MAX_ORACLE_GROUND: usize = 10;

/// A matroid given by its rank function on subsets encoded as bit masks.
pub trait RankOracle {
    fn ground_size(&self) -> usize;
    fn rank_mask(&self, mask: u64) -> usize;

    fn full_mask(&self) -> u64 {
        (1u64 << self.ground_size()) - 1
    }

    fn rank(&self, subset: &[usize]) -> usize {
        self.rank_mask(subset.iter().fold(0, |m, &i| m | 1 << i))
    }
}

/// The matroid of row dependencies of a rational matrix.
#[derive(Debug)]
pub struct LinearMatroid {
    cols: usize,
    /// Rows scaled to primitive integer vectors; rank is unaffected.
    rows: Vec<Vec<BigInt>>,
    cache: Mutex<HashMap<u64, usize>>,
}

impl LinearMatroid {
    pub fn new(cols: usize, rows: &[Vec<BigRational>]) -> Result<Self> {
        if rows.len() > MAX_GROUND {
            return Err(Error::TooLarge(format!("{} rows (max {MAX_GROUND})", rows.len())));
        }
        let mut scaled = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            let den = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scaled.push(r.iter().map(|x| (x * &den).to_integer()).collect());
        }
        Ok(LinearMatroid { cols, rows: scaled, cache: Mutex::new(HashMap::new()) })
    }

    pub fn from_int(m: &IntMatrix) -> Result<Self> {
        let rows: Vec<Vec<BigRational>> =
            m.row_iter().map(|r| r.iter().cloned().map(BigRational::from_integer).collect()).collect();
        Self::new(m.cols(), &rows)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank_mask(self.full_mask()) == self.cols
    }

    /// All bases, as sorted index lists in lexicographic order.
    pub fn bases(&self) -> Vec<Vec<usize>> {
        let r = self.rank_mask(self.full_mask());
        subsets_of_size(self.ground_size(), r).filter(|&mask| self.rank_mask(mask) == r).map(indices).collect()
    }
}

impl RankOracle for LinearMatroid {
    fn ground_size(&self) -> usize {
        self.rows.len()
    }

    fn rank_mask(&self, mask: u64) -> usize {
        if let Some(&r) = self.cache.lock().expect("cache poisoned").get(&mask) {
            return r;
        }
        let sel: Vec<Vec<BigInt>> = indices(mask).into_iter().map(|i| self.rows[i].clone()).collect();
        let r = IntMatrix::from_big_rows(self.cols, &sel).rank();
        self.cache.lock().expect("cache poisoned").insert(mask, r);
        r
    }
}

/// Witness that a matroid is `(alpha, beta)`-biased.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiasCertificate {
    /// Zero-based row indices, sorted.
    pub subset: Vec<usize>,
    pub alpha: usize,
    pub beta: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub ratio: BigRational,
}

pub(crate) fn indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

fn subsets_of_size(m: usize, k: usize) -> impl Iterator<Item = u64> {
    (0u64..1 << m).filter(move |s| s.count_ones() as usize == k)
}

/// `max (r(N) − r(N∖A)) / weight(A)` over nonempty `A`. Ties go to the
/// larger weight, then the lexicographically smallest index list.
pub fn max_drop_ratio<R: RankOracle + ?Sized>(m: &R, weight: impl Fn(u64) -> usize) -> Result<Option<BiasCertificate>> {
    let n = m.ground_size();
    if n > MAX_GROUND {
        return Err(Error::TooLarge(format!("{n} ground elements (max {MAX_GROUND})")));
    }
    let full = m.full_mask();
    let top = m.rank_mask(full);
    let mut best: Option<(BigRational, usize, Vec<usize>, usize)> = None;
    for a in 1..=full {
        let beta = top - m.rank_mask(full & !a);
        let w = weight(a);
        let ratio = BigRational::new(BigInt::from(beta), BigInt::from(w));
        let idx = indices(a);
        let replace = match &best {
            None => true,
            Some((r, bw, bi, _)) => ratio > *r || (ratio == *r && (w > *bw || (w == *bw && idx < *bi))),
        };
        if replace {
            best = Some((ratio, w, idx, beta));
        }
    }
    Ok(best.map(|(ratio, _, subset, beta)| BiasCertificate { alpha: subset.len(), subset, beta, ratio }))
}

/// `B_∞`: the maximum of `(r(N) − r(N∖A))/|A|` over nonempty `A`, which equals
/// the least `‖x‖_∞` over the base polytope.
pub fn b_infinity(m: &LinearMatroid) -> Result<(BigRational, BiasCertificate)> {
    if !m.is_full_rank() {
        return Err(Error::NotFullRank("matrix".into()));
    }
    let cert = max_drop_ratio(m, |a| a.count_ones() as usize)?
        .ok_or_else(|| Error::invalid("matrix", "at least one row is required"))?;
    Ok((cert.ratio.clone(), cert))
}

/// Least `λ` such that the base polytope meets `[0, λ]^m`, by binary search
/// over the candidates `β/α` (`α ≤ m`) with an exact LP feasibility test on
/// convex combinations of basis indicator vectors.
pub fn b_infinity_oracle(m: &LinearMatroid) -> Result<BigRational> {
    let size = m.ground_size();
    if size > MAX_ORACLE_GROUND {
        return Err(Error::TooLarge(format!("{size} rows (max {MAX_ORACLE_GROUND})")));
    }
    if !m.is_full_rank() {
        return Err(Error::NotFullRank("matrix".into()));
    }
    if size == 0 {
        return Err(Error::invalid("matrix", "at least one row is required"));
    }
    let bases = m.bases();
    let mut candidates: Vec<BigRational> =
        (1..=size).flat_map(|a| (0..=a).map(move |b| BigRational::new(BigInt::from(b), BigInt::from(a)))).collect();
    candidates.sort();
    candidates.dedup();
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    if !polytope_meets_box(&bases, size, &candidates[hi]) {
        return Err(Error::Internal("base polytope misses the unit cube".into()));
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if polytope_meets_box(&bases, size, &candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo].clone())
}

/// Feasibility of `Σ w_B = 1`, `Σ_B w_B 1_B(i) + s_i = λ`, `w, s ≥ 0`.
fn polytope_meets_box(bases: &[Vec<usize>], size: usize, lambda: &BigRational) -> bool {
    let k = bases.len();
    let cols = k + size;
    let mut a = Vec::with_capacity(size + 1);
    let mut b = Vec::with_capacity(size + 1);
    let mut sum = vec![BigRational::zero(); cols];
    for v in sum.iter_mut().take(k) {
        *v = BigRational::one();
    }
    a.push(sum);
    b.push(BigRational::one());
    for i in 0..size {
        let mut row = vec![BigRational::zero(); cols];
        for (j, basis) in bases.iter().enumerate() {
            if basis.contains(&i) {
                row[j] = BigRational::one();
            }
        }
        row[k + i] = BigRational::one();
        a.push(row);
        b.push(lambda.clone());
    }
    simplex::feasible(&a, &b)
}

/// Some `A` with `|A| = alpha` and `r(N) − r(N∖A) ≥ beta`, the
/// lexicographically first if several exist.
pub fn is_biased<R: RankOracle + ?Sized>(m: &R, alpha: usize, beta: usize) -> Option<Vec<usize>> {
    let full = m.full_mask();
    let top = m.rank_mask(full);
    let mut hits: Vec<Vec<usize>> = subsets_of_size(m.ground_size(), alpha)
        .filter(|&a| top - m.rank_mask(full & !a) >= beta)
        .map(indices)
        .collect();
    hits.sort();
    hits.into_iter().next()
}

/// The literal definition: some `A` with `|A| = alpha` meets every basis in at
/// least `beta` elements.
pub fn is_biased_by_bases(m: &LinearMatroid, alpha: usize, beta: usize) -> Option<Vec<usize>> {
    let bases = m.bases();
    let mut hits: Vec<Vec<usize>> = subsets_of_size(m.ground_size(), alpha)
        .map(indices)
        .filter(|a| bases.iter().all(|b| b.iter().filter(|i| a.contains(i)).count() >= beta))
        .collect();
    hits.sort();
    hits.into_iter().next()
}
