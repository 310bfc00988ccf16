//! Error type shared across the crate.
//!
//! Contract violations that a caller can reach through ordinary inputs are
//! reported as variants here. Violations of internal invariants that can only
//! arise from a bug (a boundary that does not square to zero, a p-series
//! coefficient that is not p-integral) are also surfaced as errors rather than
//! panics so the command-line layer can print them; they should never occur.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("degree {requested} exceeds the configured bound {bound}")]
    DegreeBound { requested: i64, bound: u32 },

    #[error("degree bound must be at least 1, got {0}")]
    EmptyWindow(u32),

    #[error("p-series table (bound {have}) does not cover requested degree bound {need}")]
    SeriesCoverage { have: u32, need: u32 },

    #[error("p-series coefficient a_{index} is not p-integral: term {term}")]
    Integrality { index: usize, term: String },

    #[error("boundary fails to square to zero in degree {degree}")]
    BoundarySquare { degree: u32 },

    #[error("boundary entry in degree {degree} does not raise the odd generator count by one")]
    OddCountViolation { degree: u32 },

    #[error("subquotient input does not compose to zero (B*A != 0)")]
    NotComposable,

    #[error("relation vector lies outside the spanned subgroup")]
    SpanViolation,

    #[error("chain in degree {degree} is not a cycle")]
    NotACycle { degree: u32 },

    #[error("generator index {index} is not stored in the table (degree bound {bound})")]
    GeneratorOutOfRange { index: usize, bound: u32 },

    #[error("torsion level {ell} must be strictly below the tensor power {k}")]
    LevelOutOfRange { ell: u32, k: u32 },

    #[error("{what} requires an odd prime")]
    OddPrimeRequired { what: &'static str },

    #[error("malformed algebra map: {0}")]
    MalformedMapSpec(String),

    #[error("elements live in different ambient rings")]
    AmbientMismatch,

    #[error("malformed table data: {0}")]
    Schema(String),

    #[error("homology in degree {degree} has unexpected free rank")]
    UnexpectedFreeRank { degree: u32 },

    #[error("tensor power must be at least 1, got {0}")]
    EmptyTensorPower(usize),
}
