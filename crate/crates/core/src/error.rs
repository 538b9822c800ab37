use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input document does not have the expected shape.
    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },

    #[error("{field}: generator not unimodular (det = {det})")]
    NotUnimodular { field: String, det: String },

    #[error("group closure cap exceeded ({cap} elements)")]
    GroupCapExceeded { cap: usize },

    #[error("{field}: coweight multiset not Galois-stable")]
    NotGaloisStable { field: String },

    #[error("dim: n = 0 rejected")]
    ZeroDimension,

    #[error("{field}: {message}")]
    Invalid { field: String, message: String },

    #[error("enumeration cap exceeded: {what} needs {needed} > {cap}")]
    EnumerationCap { what: String, needed: String, cap: String },

    #[error("lattice not preserved by the given matrix")]
    LatticeNotPreserved,

    #[error("representation is not faithful on the dual torus")]
    NotFaithful,

    #[error("projection not surjective onto G")]
    NotSurjective,

    #[error("q = {q} not coprime to lambda = {lambda}")]
    NotCoprime { q: u64, lambda: u64 },

    #[error("conductor vector not fixed by Frobenius")]
    NotFrobeniusFixed,

    #[error("{0} not full rank")]
    NotFullRank(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    /// A computation contradicted a structural guarantee.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema { field: field.into(), message: message.into() }
    }

    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid { field: field.into(), message: message.into() }
    }

    /// Whether the error concerns the shape of the input rather than its content.
    pub fn is_schema(&self) -> bool {
        matches!(self, Error::Schema { .. })
    }
}
