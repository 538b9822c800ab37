//! Archimedean block data and the matrices `M_re`, `M_int`, `M′` built from it.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::matroid::{b_infinity, max_drop_ratio, LinearMatroid, RankOracle};
use crate::torus::{SubMultiset, Torus};

/// Block data for a real torus with `n1` split, `n2` anisotropic and `n3`
/// complex factors, and `m1 + m2 + m3` rows.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchBlocks {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
    pub m1: usize,
    pub m2: usize,
    pub m3: usize,
    #[serde(rename = "A1", default)]
    pub a1: Vec<Vec<i64>>,
    #[serde(rename = "A2", default)]
    pub a2: Vec<Vec<i64>>,
    #[serde(rename = "A3", default)]
    pub a3: Vec<Vec<i64>>,
    #[serde(rename = "C", default)]
    pub c: Vec<Vec<i64>>,
    #[serde(rename = "B1", default)]
    pub b1: Vec<Vec<i64>>,
    #[serde(rename = "B2", default)]
    pub b2: Vec<Vec<i64>>,
    /// Pairs `(b, b′)`.
    #[serde(rename = "B3", default)]
    pub b3: Vec<Vec<(i64, i64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArchMatrices {
    pub m_re: IntMatrix,
    pub m_int: IntMatrix,
    pub m_prime: IntMatrix,
    /// `m1 + m2`: rows of `M_re` before the complex block.
    pub split: usize,
}

fn block<T: Clone + Default>(name: &str, m: &[Vec<T>], rows: usize, cols: usize) -> Result<Vec<Vec<T>>> {
    // An omitted block with a zero dimension is empty.
    if m.is_empty() && (rows == 0 || cols == 0) {
        return Ok(vec![vec![T::default(); cols]; rows]);
    }
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!("{name} must be {rows}x{cols}")));
    }
    Ok(m.to_vec())
}

/// Builds `M_re = [A1 B1; A2 B2; A3 B3⁺]`, `M_int = [C B3⁻]` and
/// `M′ = [A1 0 B1 B1; A2 0 B2 B2; A3 C B3⁺+B3⁻ B3⁺−B3⁻; A3 −C B3⁺−B3⁻ B3⁺+B3⁻]`
/// with `B3^± = b ± b′`.
pub fn assemble(b: &ArchBlocks) -> Result<ArchMatrices> {
    let a1 = block("A1", &b.a1, b.m1, b.n1)?;
    let a2 = block("A2", &b.a2, b.m2, b.n1)?;
    let a3 = block("A3", &b.a3, b.m3, b.n1)?;
    let c = block("C", &b.c, b.m3, b.n2)?;
    let b1 = block("B1", &b.b1, b.m1, b.n3)?;
    let b2 = block("B2", &b.b2, b.m2, b.n3)?;
    let b3 = block("B3", &b.b3, b.m3, b.n3)?;
    for i in 0..b.m3 {
        if c[i].iter().all(|&x| x == 0) && b3[i].iter().all(|&(x, y)| x == y) {
            return Err(Error::invalid(format!("archimedean.B3[{i}]"), "row needs a nonzero C entry or some b ≠ b′"));
        }
    }
    let plus: Vec<Vec<i64>> = b3.iter().map(|r| r.iter().map(|&(x, y)| x + y).collect()).collect();
    let minus: Vec<Vec<i64>> = b3.iter().map(|r| r.iter().map(|&(x, y)| x - y).collect()).collect();
    let cat = |parts: &[&[i64]]| parts.concat();
    let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
    let add = |u: &[i64], v: &[i64]| u.iter().zip(v).map(|(x, y)| x + y).collect::<Vec<_>>();
    let sub = |u: &[i64], v: &[i64]| u.iter().zip(v).map(|(x, y)| x - y).collect::<Vec<_>>();
    let zeros = vec![0i64; b.n2];

    let mut re = Vec::new();
    let mut prime = Vec::new();
    for (a, bb) in a1.iter().zip(&b1).chain(a2.iter().zip(&b2)) {
        re.push(cat(&[a, bb]));
        prime.push(cat(&[a, &zeros, bb, bb]));
    }
    for i in 0..b.m3 {
        re.push(cat(&[&a3[i], &plus[i]]));
    }
    for i in 0..b.m3 {
        prime.push(cat(&[&a3[i], &c[i], &add(&plus[i], &minus[i]), &sub(&plus[i], &minus[i])]));
    }
    for i in 0..b.m3 {
        prime.push(cat(&[&a3[i], &neg(&c[i]), &sub(&plus[i], &minus[i]), &add(&plus[i], &minus[i])]));
    }
    let int: Vec<Vec<i64>> = (0..b.m3).map(|i| cat(&[&c[i], &minus[i]])).collect();
    Ok(ArchMatrices {
        m_re: IntMatrix::from_rows(b.n1 + b.n3, &re),
        m_int: IntMatrix::from_rows(b.n2 + b.n3, &int),
        m_prime: IntMatrix::from_rows(b.n1 + b.n2 + 2 * b.n3, &prime),
        split: b.m1 + b.m2,
    })
}

/// `max( max β/(α₁ + 2α₂) over M_re, ½·max β/α over M_int )`, where `α₂`
/// counts distinguished rows from the complex block.
pub fn arch_abscissa(mats: &ArchMatrices) -> Result<BigRational> {
    let re = LinearMatroid::from_int(&mats.m_re)?;
    if !re.is_full_rank() {
        return Err(Error::NotFullRank("M_re".into()));
    }
    let complex = re.full_mask() & !((1u64 << mats.split) - 1);
    let first = max_drop_ratio(&re, |a| {
        let a2 = (a & complex).count_ones() as usize;
        a.count_ones() as usize + a2
    })?
    .map_or_else(BigRational::zero, |c| c.ratio);
    let int = LinearMatroid::from_int(&mats.m_int)?;
    let second = max_drop_ratio(&int, |a| 2 * a.count_ones() as usize)?.map_or_else(BigRational::zero, |c| c.ratio);
    Ok(first.max(second))
}

/// Whether `arch_abscissa ≤ B_∞(M′)`; `M′` must have full rank.
pub fn check_domination(mats: &ArchMatrices) -> Result<bool> {
    let prime = LinearMatroid::from_int(&mats.m_prime)?;
    if !prime.is_full_rank() {
        return Err(Error::NotFullRank("M′".into()));
    }
    let (b, _) = b_infinity(&prime)?;
    Ok(arch_abscissa(mats)? <= b)
}

/// Checks that the rows of `M′` match the coweights of `torus`, row `i`
/// standing for one copy of coweight `row_to_coweight[i]`: every row set `R`
/// and its multiset `S` have `dim D(S) = n − rank(M′ rows outside R)`.
pub fn rows_match_coweights(mats: &ArchMatrices, torus: &Torus, row_to_coweight: &[usize]) -> Result<bool> {
    let m = mats.m_prime.rows();
    let sys = torus.coweights();
    if row_to_coweight.len() != m || mats.m_prime.cols() != torus.dim() {
        return Err(Error::DimensionMismatch("row correspondence".into()));
    }
    let mut copies = vec![0u64; sys.distinct_count()];
    for &j in row_to_coweight {
        *copies.get_mut(j).ok_or_else(|| Error::DimensionMismatch("coweight index".into()))? += 1;
    }
    if copies != sys.multiplicity() {
        return Ok(false);
    }
    let lm = LinearMatroid::from_int(&mats.m_prime)?;
    let full = lm.full_mask();
    for r in 0..=full {
        let mut counts = vec![0u64; sys.distinct_count()];
        for (i, &j) in row_to_coweight.iter().enumerate() {
            if r >> i & 1 == 1 {
                counts[j] += 1;
            }
        }
        let s = SubMultiset::new(counts);
        let rest = lm.rank_mask(full & !r);
        if s.size() != r.count_ones() as u64 || torus.diag_group(&s).dimension + rest != torus.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}
