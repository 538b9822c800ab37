//! Worked examples with known invariants, checked end to end.

use crate::error::Result;
use crate::report::analyze;
use crate::schema::{build, CoweightEntry, SpecDocument};
use crate::torus::Limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub a: &'static str,
    pub lambda: Option<u64>,
    pub sigma_tilde0_size: Option<usize>,
    pub deg_p: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct GalleryExample {
    pub name: &'static str,
    pub spec: SpecDocument,
    pub expected: Expectation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalleryRow {
    pub name: &'static str,
    pub passed: bool,
    /// Observed values, or the error that stopped the analysis.
    pub detail: String,
}

fn doc(dim: usize, generators: Vec<Vec<Vec<i64>>>, coweights: &[(Vec<i64>, u64)]) -> SpecDocument {
    SpecDocument {
        dim,
        generators,
        coweights: coweights.iter().map(|(v, m)| CoweightEntry { vector: v.clone(), multiplicity: *m }).collect(),
        gtilde: None,
        archimedean: None,
    }
}

/// The permutation torus of rank `n − 1`: coweights `e_1, …, e_{n−1}` and
/// `−(e_1 + … + e_{n−1})`, permuted by `G ⊆ S_n`.
pub fn permutation_torus(n: usize, generators: &[Vec<usize>]) -> SpecDocument {
    let r = n - 1;
    let z = |k: usize| -> Vec<i64> {
        if k < r {
            (0..r).map(|i| i64::from(i == k)).collect()
        } else {
            vec![-1; r]
        }
    };
    let mats = generators
        .iter()
        .map(|sigma| {
            // Column j is the image of e_j, namely z_{σ(j)}.
            let cols: Vec<Vec<i64>> = (0..r).map(|j| z(sigma[j])).collect();
            (0..r).map(|i| (0..r).map(|j| cols[j][i]).collect()).collect()
        })
        .collect();
    let coweights: Vec<(Vec<i64>, u64)> = (0..n).map(|k| (z(k), 1)).collect();
    doc(r, mats, &coweights)
}

fn cycle(n: usize) -> Vec<usize> {
    (0..n).map(|i| (i + 1) % n).collect()
}

fn transposition(n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(0, 1);
    p
}

pub fn gallery() -> Vec<GalleryExample> {
    let e = |a, lambda, sigma_tilde0_size, deg_p| Expectation { a, lambda, sigma_tilde0_size, deg_p };
    vec![
        GalleryExample {
            name: "Example 1: GL1, r = id",
            spec: doc(1, vec![], &[(vec![1], 1)]),
            expected: e("2", Some(1), Some(1), Some(0)),
        },
        GalleryExample {
            name: "Example 2: GL1, r = 1001 copies of id",
            spec: doc(1, vec![], &[(vec![1], 1001)]),
            expected: e("2/1001", Some(1), None, None),
        },
        GalleryExample {
            name: "Example 3: GL1, r = z^2 + z^3",
            spec: doc(1, vec![], &[(vec![2], 1), (vec![3], 1)]),
            expected: e("1", Some(6), Some(4), Some(2)),
        },
        GalleryExample {
            name: "Example 4: Gm^2, standard coweights",
            spec: doc(2, vec![], &[(vec![1, 0], 1), (vec![0, 1], 1)]),
            expected: e("2", None, None, Some(1)),
        },
        GalleryExample {
            name: "Example 5: permutation torus, G = S3",
            spec: permutation_torus(3, &[transposition(3), cycle(3)]),
            expected: e("1", Some(1), None, Some(1)),
        },
        GalleryExample {
            name: "Example 5: permutation torus, G = S4",
            spec: permutation_torus(4, &[transposition(4), cycle(4)]),
            expected: e("1", Some(1), None, Some(2)),
        },
        GalleryExample {
            name: "Example 5: permutation torus, G = Z/4",
            spec: permutation_torus(4, &[cycle(4)]),
            expected: e("1", Some(1), None, Some(3)),
        },
    ]
}

/// Analyses one example and compares every expected value.
pub fn run_example(ex: &GalleryExample) -> GalleryRow {
    match observe(ex) {
        Ok((passed, detail)) => GalleryRow { name: ex.name, passed, detail },
        Err(e) => GalleryRow { name: ex.name, passed: false, detail: format!("error: {e}") },
    }
}

fn observe(ex: &GalleryExample) -> Result<(bool, String)> {
    let spec = build(ex.spec.clone(), Limits::default())?;
    let r = analyze(&spec)?;
    let want = &ex.expected;
    let passed = r.a.as_deref() == Some(want.a)
        && want.lambda.is_none_or(|l| l == r.lambda)
        && want.sigma_tilde0_size.is_none_or(|s| Some(s) == r.sigma_tilde0_size)
        && want.deg_p.is_none_or(|d| Some(d) == r.deg_p);
    let detail = format!(
        "A = {}, lambda = {}, |Sigma~_0| = {}, deg P = {}",
        r.a.as_deref().unwrap_or("-"),
        r.lambda,
        r.sigma_tilde0_size.map_or("-".into(), |x| x.to_string()),
        r.deg_p.map_or("-".into(), |x| x.to_string()),
    );
    Ok((passed, detail))
}

pub fn run_gallery(examples: &[GalleryExample]) -> Vec<GalleryRow> {
    examples.iter().map(run_example).collect()
}
