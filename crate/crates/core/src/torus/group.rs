use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: IntMatrix,
    /// A word in the generators whose product is `matrix`.
    pub word: Vec<usize>,
}

/// The rank-`n` cocharacter lattice together with the finite group of lattice
/// automorphisms generated by the Galois generators.
#[derive(Clone, Debug)]
pub struct TorusSpec {
    dim: usize,
    generators: Vec<IntMatrix>,
    elements: Vec<GroupElement>,
    index: HashMap<IntMatrix, usize>,
}

/// Largest supported cocharacter rank.
pub const MAX_DIM: usize = 64;

impl TorusSpec {
    /// Validates the generators and closes them under multiplication.
    /// Element 0 is always the identity.
    pub fn new(dim: usize, generators: Vec<IntMatrix>, group_cap: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if dim > MAX_DIM {
            return Err(Error::TooLarge(format!("dim = {dim} exceeds {MAX_DIM}")));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(Error::schema(
                    format!("generators[{i}]"),
                    format!("expected a {dim}x{dim} matrix, got {}x{}", g.rows(), g.cols()),
                ));
            }
            if !g.is_unimodular() {
                return Err(Error::NotUnimodular { field: format!("generators[{i}]"), det: g.det().to_string() });
            }
        }

        let identity = IntMatrix::identity(dim);
        let mut elements = vec![GroupElement { matrix: identity.clone(), word: Vec::new() }];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (gi, g) in generators.iter().enumerate() {
                let prod = &elements[e].matrix * g;
                if index.contains_key(&prod) {
                    continue;
                }
                if elements.len() >= group_cap {
                    return Err(Error::GroupCapExceeded { cap: group_cap });
                }
                let mut word = elements[e].word.clone();
                word.push(gi);
                index.insert(prod.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(GroupElement { matrix: prod, word });
            }
        }
        Ok(TorusSpec { dim, generators, elements, index })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn matrix(&self, g: usize) -> &IntMatrix {
        &self.elements[g].matrix
    }

    pub fn index_of(&self, m: &IntMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let prod = &self.elements[a].matrix * &self.elements[b].matrix;
        self.index[&prod]
    }

    /// Multiplicative order of an element.
    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut cur = g;
        while cur != 0 {
            cur = self.mul(cur, g);
            k += 1;
        }
        k
    }

    /// Evaluates a word of generator indices (empty word is the identity).
    pub fn evaluate_word(&self, word: &[usize]) -> Result<usize> {
        let mut cur = IntMatrix::identity(self.dim);
        for (pos, &gi) in word.iter().enumerate() {
            let g = self.generators.get(gi).ok_or_else(|| {
                Error::invalid(
                    format!("word[{pos}]"),
                    format!("generator index {gi} out of range (have {})", self.generators.len()),
                )
            })?;
            cur = &cur * g;
        }
        Ok(self.index[&cur])
    }
}
