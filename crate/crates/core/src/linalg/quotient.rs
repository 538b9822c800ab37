use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{smith_normal_form, FinAbGroup, IntMatrix};
use crate::error::{Error, Result};

/// `Z^n / L` where `L` is the row span of `relations`.
///
/// Coordinates come from the column transform `V` of the Smith form: a row
/// vector `v` is sent to `w = v·V`, in which `L` becomes `⊕ d_i Z`.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    ambient_rank: usize,
    relations: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
    /// All nonzero diagonal entries (including ones).
    diagonal: Vec<BigInt>,
    torsion_slots: Vec<usize>,
    group: FinAbGroup,
}

pub fn lattice_quotient(ambient_rank: usize, relations: &IntMatrix) -> LatticeQuotient {
    assert_eq!(relations.cols(), ambient_rank, "relations must have ambient_rank columns");
    let snf = smith_normal_form(relations);
    let diagonal = snf.invariant_factors();
    let torsion_slots: Vec<usize> = (0..diagonal.len()).filter(|&i| diagonal[i] > BigInt::one()).collect();
    let group = FinAbGroup {
        invariant_factors: torsion_slots.iter().map(|&i| diagonal[i].clone()).collect(),
        free_rank: ambient_rank - diagonal.len(),
    };
    LatticeQuotient {
        ambient_rank,
        relations: relations.clone(),
        v: snf.v,
        v_inv: snf.v_inv,
        diagonal,
        torsion_slots,
        group,
    }
}

impl LatticeQuotient {
    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn relation_rank(&self) -> usize {
        self.diagonal.len()
    }

    fn transform(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ambient_rank);
        left_apply(v, &self.v)
    }

    /// Torsion coordinates of the class of `v`.
    pub fn to_coords(&self, v: &[BigInt]) -> Vec<BigInt> {
        let w = self.transform(v);
        self.torsion_slots.iter().map(|&i| w[i].mod_floor(&self.diagonal[i])).collect()
    }

    /// Coordinates of the class of `v` in the free quotient `Z^free_rank`.
    pub fn free_coords(&self, v: &[BigInt]) -> Vec<BigInt> {
        let w = self.transform(v);
        w[self.diagonal.len()..].to_vec()
    }

    /// A representative in `Z^n` of the torsion element `y`.
    pub fn from_coords(&self, y: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(y.len(), self.torsion_slots.len());
        let mut w = vec![BigInt::zero(); self.ambient_rank];
        for (&slot, yi) in self.torsion_slots.iter().zip(y) {
            w[slot] = yi.clone();
        }
        left_apply(&w, &self.v_inv)
    }

    /// A representative in `Z^n` whose free coordinates are `f` and whose
    /// torsion coordinates vanish.
    pub fn from_free_coords(&self, f: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(f.len(), self.group.free_rank);
        let mut w = vec![BigInt::zero(); self.ambient_rank];
        w[self.diagonal.len()..].clone_from_slice(f);
        left_apply(&w, &self.v_inv)
    }

    /// Whether `v` lies in the relation lattice.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let w = self.transform(v);
        let r = self.diagonal.len();
        w[..r].iter().zip(&self.diagonal).all(|(wi, d)| wi.is_multiple_of(d)) && w[r..].iter().all(Zero::is_zero)
    }
}

/// Row vector times matrix.
fn left_apply(v: &[BigInt], m: &IntMatrix) -> Vec<BigInt> {
    (0..m.cols()).map(|j| v.iter().enumerate().map(|(i, vi)| vi * &m[(i, j)]).sum()).collect()
}

/// A homomorphism between torsion subgroups, stored as the images of the
/// source's standard generators.
#[derive(Clone, PartialEq, Eq)]
pub struct TorsionMap {
    source: FinAbGroup,
    target: FinAbGroup,
    images: Vec<Vec<BigInt>>,
}

impl TorsionMap {
    pub fn identity(g: &FinAbGroup) -> Self {
        let k = g.invariant_factors.len();
        let images =
            (0..k).map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        TorsionMap { source: g.clone(), target: g.clone(), images }
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn apply(&self, y: &[BigInt]) -> Vec<BigInt> {
        let mut out = self.target.identity();
        for (yi, img) in y.iter().zip(&self.images) {
            for (o, c) in out.iter_mut().zip(img) {
                *o += yi * c;
            }
        }
        self.target.normalize(&mut out);
        out
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &TorsionMap) -> TorsionMap {
        assert_eq!(self.target, after.source, "composition of incompatible maps");
        TorsionMap {
            source: self.source.clone(),
            target: after.target.clone(),
            images: self.images.iter().map(|img| after.apply(img)).collect(),
        }
    }

    /// Multiplies every image by `k`.
    pub fn scaled(&self, k: &BigInt) -> TorsionMap {
        TorsionMap {
            source: self.source.clone(),
            target: self.target.clone(),
            images: self.images.iter().map(|img| self.target.scale(img, k)).collect(),
        }
    }

    /// `self - k·id`, for endomorphisms.
    pub fn minus_scalar(&self, k: &BigInt) -> TorsionMap {
        assert_eq!(self.source, self.target);
        let id = TorsionMap::identity(&self.source);
        let images = self
            .images
            .iter()
            .zip(&id.images)
            .map(|(a, e)| {
                let mut v: Vec<BigInt> = a.iter().zip(e).map(|(x, y)| x - k * y).collect();
                self.target.normalize(&mut v);
                v
            })
            .collect();
        TorsionMap { source: self.source.clone(), target: self.target.clone(), images }
    }
}

impl fmt::Debug for TorsionMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorsionMap")
            .field("source", &self.source.invariant_factors)
            .field("target", &self.target.invariant_factors)
            .field("images", &self.images)
            .finish()
    }
}

/// The map on torsion induced by `p: Z^n → Z^n` from `src` to `dst`; requires
/// `p` to send the relation lattice of `src` into that of `dst`.
pub fn induced_map(src: &LatticeQuotient, dst: &LatticeQuotient, p: &IntMatrix) -> Result<TorsionMap> {
    let n = src.ambient_rank;
    if p.rows() != n || p.cols() != n || dst.ambient_rank != n {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix on rank-{n} lattice", p.rows(), p.cols())));
    }
    for r in src.relations.row_iter() {
        if !dst.contains(&p.apply(r)) {
            return Err(Error::LatticeNotPreserved);
        }
    }
    let k = src.group.invariant_factors.len();
    let images = (0..k)
        .map(|i| {
            let mut e = vec![BigInt::zero(); k];
            e[i] = BigInt::one();
            dst.to_coords(&p.apply(&src.from_coords(&e)))
        })
        .collect();
    Ok(TorsionMap { source: src.group.clone(), target: dst.group.clone(), images })
}

pub fn induced_endomorphism(q: &LatticeQuotient, p: &IntMatrix) -> Result<TorsionMap> {
    induced_map(q, q, p)
}

/// The matrix of the map induced by `p` on the free quotient of `q`.
pub fn induced_free_map(q: &LatticeQuotient, p: &IntMatrix) -> Result<IntMatrix> {
    for r in q.relations.row_iter() {
        if !q.contains(&p.apply(r)) {
            return Err(Error::LatticeNotPreserved);
        }
    }
    let f = q.group.free_rank;
    let mut out = IntMatrix::zeros(f, f);
    for j in 0..f {
        let mut e = vec![BigInt::zero(); f];
        e[j] = BigInt::one();
        let img = q.free_coords(&p.apply(&q.from_free_coords(&e)));
        for (i, c) in img.into_iter().enumerate() {
            out[(i, j)] = c;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CokernelOrder {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for CokernelOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CokernelOrder::Finite(n) => write!(f, "{n}"),
            CokernelOrder::Infinite => write!(f, "infinite"),
        }
    }
}

/// Order of `Z^n / rowspace(relations)`.
pub fn finite_cokernel_order(ambient_rank: usize, relations: &IntMatrix) -> CokernelOrder {
    let snf = smith_normal_form(relations);
    if snf.rank() < ambient_rank {
        CokernelOrder::Infinite
    } else {
        CokernelOrder::Finite(snf.invariant_factors().iter().product())
    }
}
