//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A singularity type failed validation, e.g. `gcd(q,n) != 1`.
    #[error("invalid type: {0}")]
    InvalidType(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    /// `|G| * Theta` must be an even integer for the Hurwitz formula.
    #[error("non-integral genus: |G|*Theta = {0} is not an even integer")]
    NonIntegralGenus(String),

    #[error("genus too small: g = {0} < 2")]
    GenusTooSmall(String),

    /// The regular pipeline requires `gamma + p_g` to be a nonnegative integer.
    #[error("invalid gamma for the regular pipeline: {0}")]
    InvalidGamma(String),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("group closure exceeded the order limit {0}")]
    OrderLimitExceeded(usize),

    #[error("catalog parse error at line {line}: {message}")]
    CatalogParse { line: usize, message: String },

    #[error("duplicate catalog id {0}")]
    DuplicateId(String),

    #[error("order mismatch for {id}: header says {declared}, closure has {actual}")]
    OrderMismatch {
        id: String,
        declared: usize,
        actual: usize,
    },

    #[error("invalid generating vector: {0}")]
    InvalidGeneratingVector(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Dualization is only defined for regular surfaces (q = 0).
    #[error("surface is not regular (q = {0})")]
    NotRegular(u64),

    /// A cross-check failed while assembling a surface; this signals an
    /// upstream bug, not a user error.
    #[error("inconsistent surface: {0}")]
    InconsistentSurface(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
