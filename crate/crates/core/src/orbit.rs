//! The enlarged group `G̃ ⊆ G × (Z/λ)^×`, the fibered set `Σ̃₀`, and the orbit
//! count that gives the degree of the log-polynomial.
//!
//! Fiber points are kept in torsion coordinates of the character group
//! `X^*(D(S))`, on which `(g, u)` acts by `u` times the map induced by `g`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{induced_map, TorsionMap};
use crate::torus::{SubMultiset, Torus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GTildeMode {
    Full,
    Explicit,
}

/// A generator of an explicit `G̃`: a word in the Galois generators and a unit
/// modulo `λ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GTildeGenerator {
    pub g: Vec<usize>,
    pub unit: i64,
}

/// `(group element index, unit residue mod λ)`.
pub type GTildeElement = (usize, u64);

#[derive(Clone, Debug)]
pub struct GTilde {
    lambda: u64,
    mode: GTildeMode,
    /// Sorted.
    elements: Vec<GTildeElement>,
}

impl GTilde {
    /// `G × (Z/λ)^×` when `explicit` is `None`, otherwise the subgroup
    /// generated by the given pairs, which must surject onto `G`.
    pub fn build(torus: &Torus, lambda: &BigInt, explicit: Option<&[GTildeGenerator]>) -> Result<Self> {
        let cap = torus.limits().group_cap;
        let lam = lambda
            .to_u64()
            .filter(|&l| l >= 1 && l <= cap as u64)
            .ok_or_else(|| Error::TooLarge(format!("lambda = {lambda}")))?;
        let spec = torus.spec();
        match explicit {
            None => {
                let units: Vec<u64> = (0..lam).filter(|u| u.gcd(&lam) == 1).collect();
                if spec.order().saturating_mul(units.len()) > cap {
                    return Err(Error::GroupCapExceeded { cap });
                }
                let elements = (0..spec.order()).flat_map(|g| units.iter().map(move |&u| (g, u))).collect();
                Ok(GTilde { lambda: lam, mode: GTildeMode::Full, elements })
            }
            Some(gens) => {
                let mut pairs = Vec::with_capacity(gens.len());
                for (i, gen) in gens.iter().enumerate() {
                    let g = spec.evaluate_word(&gen.g).map_err(|e| match e {
                        Error::Invalid { field, message } => {
                            Error::invalid(format!("gtilde.generators[{i}].g.{field}"), message)
                        }
                        other => other,
                    })?;
                    let u = gen.unit.rem_euclid(lam as i64) as u64;
                    if u.gcd(&lam) != 1 {
                        return Err(Error::invalid(
                            format!("gtilde.generators[{i}].unit"),
                            format!("{} is not a unit modulo lambda = {lam}", gen.unit),
                        ));
                    }
                    pairs.push((g, u));
                }
                let mut elements = vec![(0usize, 1 % lam)];
                let mut seen = HashMap::from([(elements[0], 0usize)]);
                let mut queue = VecDeque::from([0usize]);
                while let Some(e) = queue.pop_front() {
                    for &(g, u) in &pairs {
                        let (h, v) = elements[e];
                        let next = (spec.mul(h, g), v * u % lam);
                        if seen.contains_key(&next) {
                            continue;
                        }
                        if elements.len() >= cap {
                            return Err(Error::GroupCapExceeded { cap });
                        }
                        seen.insert(next, elements.len());
                        queue.push_back(elements.len());
                        elements.push(next);
                    }
                }
                let mut hit = vec![false; spec.order()];
                for &(g, _) in &elements {
                    hit[g] = true;
                }
                if hit.iter().any(|h| !h) {
                    return Err(Error::NotSurjective);
                }
                elements.sort_unstable();
                Ok(GTilde { lambda: lam, mode: GTildeMode::Explicit, elements })
            }
        }
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn mode(&self) -> GTildeMode {
        self.mode
    }

    pub fn elements(&self) -> &[GTildeElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: GTildeElement) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn compose(&self, torus: &Torus, a: GTildeElement, b: GTildeElement) -> GTildeElement {
        (torus.spec().mul(a.0, b.0), a.1 * b.1 % self.lambda)
    }
}

/// A point `(S, y)` of `Σ̃`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SigmaTildeElement {
    pub subset: SubMultiset,
    pub fiber: Vec<BigInt>,
}

impl fmt::Display for SigmaTildeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, [", self.subset)?;
        for (i, y) in self.fiber.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{y}")?;
        }
        write!(f, "])")
    }
}

/// `Σ̃₀` with the action of `G̃` and its orbits.
pub struct OrbitAnalysis<'a> {
    torus: &'a Torus,
    gtilde: GTilde,
    elements: Vec<SigmaTildeElement>,
    index: HashMap<SigmaTildeElement, usize>,
    transport: Mutex<HashMap<(usize, SubMultiset), TorsionMap>>,
}

impl<'a> OrbitAnalysis<'a> {
    /// Builds `Σ̃₀`: every `(S, y)` with `S ∈ Σ`, minus `(S, 0)` when
    /// `dim D(S) = 0`. Elements are sorted by subset then fiber coordinates.
    pub fn new(torus: &'a Torus, gtilde: GTilde) -> Result<Self> {
        let cap = torus.limits().enumeration_cap;
        let mut elements = Vec::new();
        for s in torus.sigma_set()? {
            let d = torus.diag_group(&s);
            for y in d.pi0.elements(cap)? {
                if d.dimension == 0 && y.iter().all(Zero::is_zero) {
                    continue;
                }
                elements.push(SigmaTildeElement { subset: s.clone(), fiber: y });
                if elements.len() as u64 > cap {
                    return Err(Error::EnumerationCap {
                        what: "fibered set".into(),
                        needed: format!("> {cap}"),
                        cap: cap.to_string(),
                    });
                }
            }
        }
        elements.sort();
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok(OrbitAnalysis { torus, gtilde, elements, index, transport: Mutex::new(HashMap::new()) })
    }

    pub fn gtilde(&self) -> &GTilde {
        &self.gtilde
    }

    pub fn sigma_tilde0(&self) -> &[SigmaTildeElement] {
        &self.elements
    }

    fn transport(&self, g: usize, s: &SubMultiset) -> Result<TorsionMap> {
        let key = (g, s.clone());
        if let Some(m) = self.transport.lock().expect("cache poisoned").get(&key) {
            return Ok(m.clone());
        }
        let gs = self.torus.coweights().act(g, s);
        let src = self.torus.diag_group(s);
        let dst = self.torus.diag_group(&gs);
        let m = induced_map(&src.quotient, &dst.quotient, self.torus.spec().matrix(g))?;
        self.transport.lock().expect("cache poisoned").insert(key, m.clone());
        Ok(m)
    }

    /// `(g, u)·(S, y) = (gS, u·g_*(y))`.
    pub fn act(&self, g: GTildeElement, e: &SigmaTildeElement) -> Result<SigmaTildeElement> {
        let map = self.transport(g.0, &e.subset)?;
        let subset = self.torus.coweights().act(g.0, &e.subset);
        let fiber = map.target().scale(&map.apply(&e.fiber), &BigInt::from(g.1));
        Ok(SigmaTildeElement { subset, fiber })
    }

    fn act_index(&self, g: GTildeElement, i: usize) -> Result<usize> {
        let img = self.act(g, &self.elements[i])?;
        self.index.get(&img).copied().ok_or_else(|| Error::Internal(format!("{img} left the fibered set")))
    }

    /// Orbits as sorted index lists, ordered by their smallest element.
    pub fn orbits(&self) -> Result<Vec<Vec<usize>>> {
        let mut seen = vec![false; self.elements.len()];
        let mut out = Vec::new();
        for start in 0..self.elements.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for &g in self.gtilde.elements() {
                    let j = self.act_index(g, i)?;
                    if !seen[j] {
                        seen[j] = true;
                        orbit.push(j);
                        queue.push_back(j);
                    }
                }
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        Ok(out)
    }

    pub fn orbit_count(&self) -> Result<usize> {
        Ok(self.orbits()?.len())
    }

    /// `|G̃ \ Σ̃₀| − 1`.
    pub fn deg_p(&self) -> Result<usize> {
        self.orbit_count()?.checked_sub(1).ok_or_else(|| Error::Internal("empty fibered set".into()))
    }

    /// Orbit count by averaging fixed points over `G̃`.
    pub fn burnside_count(&self) -> Result<usize> {
        let mut fixed = 0usize;
        for &g in self.gtilde.elements() {
            for i in 0..self.elements.len() {
                if self.act_index(g, i)? == i {
                    fixed += 1;
                }
            }
        }
        let (q, r) = fixed.div_rem(&self.gtilde.order());
        if r != 0 {
            return Err(Error::Internal("fixed-point total not divisible by |G̃|".into()));
        }
        Ok(q)
    }

    /// Orbits per stratum `(dim D(S), |S|)`; strata with no surviving fiber
    /// points map to 0.
    pub fn stratum_orbits(&self) -> Result<BTreeMap<(usize, u64), usize>> {
        let mut out: BTreeMap<(usize, u64), usize> = self.torus.strata()?.keys().map(|&k| (k, 0)).collect();
        for orbit in self.orbits()? {
            let s = &self.elements[orbit[0]].subset;
            let key = (self.torus.diag_group(s).dimension, s.size());
            *out.entry(key).or_default() += 1;
        }
        Ok(out)
    }
}
