//! Exact invariants governing the count of rational points of bounded
//! conductor on algebraic tori: the exponent `A`, the pole order `deg P`,
//! unramified local factors, and the matroid bounds behind archimedean
//! convergence.

pub mod arch;
pub mod error;
pub mod gallery;
pub mod linalg;
pub mod local;
pub mod matroid;
pub mod orbit;
pub mod rational;
pub mod report;
pub mod schema;
pub mod torus;

pub use error::{Error, Result};
