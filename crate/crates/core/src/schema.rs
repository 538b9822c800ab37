//! The JSON input formats: torus specifications and rational matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::arch::ArchBlocks;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::orbit::{GTildeGenerator, GTildeMode};
use crate::rational;
use crate::torus::{CoweightSystem, Limits, Torus, TorusSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub dim: usize,
    /// Row-major `dim × dim` matrices acting on cocharacters.
    pub generators: Vec<Vec<Vec<i64>>>,
    pub coweights: Vec<CoweightEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gtilde: Option<GTildeDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub archimedean: Option<ArchBlocks>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoweightEntry {
    pub vector: Vec<i64>,
    pub multiplicity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GTildeDocument {
    pub mode: GTildeMode,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GTildeGenerator>,
}

/// A validated specification.
#[derive(Debug)]
pub struct LoadedSpec {
    pub torus: Torus,
    pub gtilde: Option<GTildeDocument>,
    pub archimedean: Option<ArchBlocks>,
}

impl LoadedSpec {
    /// Explicit `G̃` generators, if the document asks for them.
    pub fn gtilde_generators(&self) -> Option<&[GTildeGenerator]> {
        match &self.gtilde {
            Some(GTildeDocument { mode: GTildeMode::Explicit, generators }) => Some(generators),
            _ => None,
        }
    }
}

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." || path == "?" { "document".to_string() } else { path };
        Error::schema(path, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| Error::schema("document", e.to_string()))?;
    Ok(value)
}

/// Parses a specification without validating its content.
pub fn parse_spec(text: &str) -> Result<SpecDocument> {
    from_json(text)
}

/// Parses and validates a specification.
pub fn load_spec(text: &str, limits: Limits) -> Result<LoadedSpec> {
    build(parse_spec(text)?, limits)
}

/// Validates a parsed specification: shapes, unimodularity, group closure,
/// and stability of the coweight multiset.
pub fn build(doc: SpecDocument, limits: Limits) -> Result<LoadedSpec> {
    let n = doc.dim;
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut generators = Vec::with_capacity(doc.generators.len());
    for (i, g) in doc.generators.iter().enumerate() {
        if g.len() != n {
            return Err(Error::schema(format!("generators[{i}]"), format!("expected {n} rows, got {}", g.len())));
        }
        for (r, row) in g.iter().enumerate() {
            if row.len() != n {
                return Err(Error::schema(
                    format!("generators[{i}][{r}]"),
                    format!("expected {n} entries, got {}", row.len()),
                ));
            }
        }
        generators.push(IntMatrix::from_rows(n, g));
    }
    let spec = TorusSpec::new(n, generators, limits.group_cap)?;
    let coweights =
        doc.coweights.iter().map(|c| (c.vector.iter().map(|&x| BigInt::from(x)).collect(), c.multiplicity)).collect();
    let system = CoweightSystem::new(&spec, coweights)?;
    if let Some(g) = &doc.gtilde {
        if g.mode == GTildeMode::Full && !g.generators.is_empty() {
            return Err(Error::invalid("gtilde.generators", "only allowed with mode \"explicit\""));
        }
    }
    Ok(LoadedSpec { torus: Torus::new(spec, system, limits)?, gtilde: doc.gtilde, archimedean: doc.archimedean })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

/// Parses a JSON array of equal-length rows whose entries are integers or
/// `"p/q"` strings. Returns the column count and the rows.
pub fn parse_rational_matrix(text: &str) -> Result<(usize, Vec<Vec<BigRational>>)> {
    let raw: Vec<Vec<Entry>> = from_json(text)?;
    let Some(cols) = raw.first().map(Vec::len) else {
        return Err(Error::invalid("matrix", "at least one row is required"));
    };
    let mut rows = Vec::with_capacity(raw.len());
    for (i, r) in raw.into_iter().enumerate() {
        if r.len() != cols {
            return Err(Error::schema(format!("[{i}]"), format!("expected {cols} entries, got {}", r.len())));
        }
        let mut row = Vec::with_capacity(cols);
        for (j, e) in r.into_iter().enumerate() {
            row.push(match e {
                Entry::Int(x) => BigRational::from_integer(x.into()),
                Entry::Text(s) => rational::parse(&s).map_err(|m| Error::schema(format!("[{i}][{j}]"), m))?,
            });
        }
        rows.push(row);
    }
    Ok((cols, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<LoadedSpec> {
        load_spec(text, Limits::default())
    }

    #[test]
    fn gl1() {
        let s = load(r#"{"dim":1,"generators":[],"coweights":[{"vector":[1],"multiplicity":1}]}"#).unwrap();
        assert_eq!(s.torus.spec().order(), 1);
        assert_eq!(s.torus.coweights().total(), 1);
        assert!(s.gtilde.is_none() && s.archimedean.is_none());
    }

    #[test]
    fn validation_errors() {
        let e = load(r#"{"dim":1,"generators":[[[2]]],"coweights":[{"vector":[1],"multiplicity":1}]}"#).unwrap_err();
        assert_eq!(e, Error::NotUnimodular { field: "generators[0]".into(), det: "2".into() });
        let e = load(r#"{"dim":2,"generators":[[[0,1],[1,0]]],"coweights":[{"vector":[1,0],"multiplicity":1}]}"#)
            .unwrap_err();
        assert!(matches!(e, Error::NotGaloisStable { .. }));
        let e = load(r#"{"dim":0,"generators":[],"coweights":[]}"#).unwrap_err();
        assert_eq!(e, Error::ZeroDimension);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let e = load(r#"{"dim":1,"generators":[],"coweights":[{"vector":[1],"multiplicity":"x"}]}"#).unwrap_err();
        match e {
            Error::Schema { field, .. } => assert_eq!(field, "coweights[0].multiplicity"),
            other => panic!("{other:?}"),
        }
        let e = load(r#"{"dim":1,"generators":[],"coweights":[],"extra":1}"#).unwrap_err();
        assert!(e.is_schema());
        let e = load(r#"{"dim":2,"generators":[[[1,0]]],"coweights":[]}"#).unwrap_err();
        assert_eq!(e, Error::schema("generators[0]", "expected 2 rows, got 1"));
        let e = load(r#"{"dim":1,"generators":[],"coweights":[{"vector":[1,2],"multiplicity":1}]}"#).unwrap_err();
        assert!(matches!(e, Error::Schema { ref field, .. } if field == "coweights[0].vector"));
        assert!(matches!(load("{").unwrap_err(), Error::Schema { ref field, .. } if field == "document"));
        assert!(load(r#"{"dim":1,"generators":[],"coweights":[]} x"#).unwrap_err().is_schema());
    }

    #[test]
    fn gtilde_and_arch_sections() {
        let s = load(
            r#"{"dim":1,"generators":[],"coweights":[{"vector":[2],"multiplicity":1},{"vector":[3],"multiplicity":1}],
                "gtilde":{"mode":"explicit","generators":[{"g":[],"unit":5}]},
                "archimedean":{"n1":1,"n2":0,"n3":0,"m1":1,"m2":0,"m3":0,"A1":[[1]]}}"#,
        )
        .unwrap();
        assert_eq!(s.gtilde_generators().unwrap(), &[GTildeGenerator { g: vec![], unit: 5 }]);
        assert_eq!(s.archimedean.unwrap().a1, vec![vec![1]]);
        let e = load(
            r#"{"dim":1,"generators":[],"coweights":[{"vector":[1],"multiplicity":1}],"gtilde":{"mode":"other"}}"#,
        )
        .unwrap_err();
        assert!(matches!(e, Error::Schema { ref field, .. } if field == "gtilde.mode"));
    }

    #[test]
    fn round_trip() {
        let text =
            r#"{"dim":1,"generators":[],"coweights":[{"vector":[1],"multiplicity":3}],"gtilde":{"mode":"full"}}"#;
        let doc = parse_spec(text).unwrap();
        assert_eq!(serde_json::to_string(&doc).unwrap(), text);
    }

    #[test]
    fn rational_matrices() {
        let (cols, rows) = parse_rational_matrix(r#"[[1, "1/2"], [0, "-3"]]"#).unwrap();
        assert_eq!(cols, 2);
        assert_eq!(rows[0][1], BigRational::new(1.into(), 2.into()));
        assert_eq!(rows[1][1], BigRational::from_integer((-3).into()));
        assert!(parse_rational_matrix("[[1],[1,2]]").unwrap_err().is_schema());
        assert!(parse_rational_matrix(r#"[["1/0"]]"#).unwrap_err().is_schema());
        assert!(parse_rational_matrix("[[1.5]]").unwrap_err().is_schema());
        assert!(matches!(parse_rational_matrix("[]").unwrap_err(), Error::Invalid { .. }));
    }
}
