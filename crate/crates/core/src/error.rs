//! Error type shared by the whole library.

use crate::seq::Condition;

/// Everything that can go wrong when validating input data or applying an
/// operation outside its domain.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("degree sequence must contain at least one entry")]
    EmptySequence,

    #[error("degree entries must be positive integers, got `{0}`")]
    NonPositiveEntry(String),

    #[error("degree sequence is not non-decreasing at position {position} (1-based)")]
    OutOfOrder { position: usize },

    #[error("cannot parse `{0}` as a comma-separated list of positive integers")]
    ParseSequence(String),

    #[error("surface degrees must have exactly one more entry than threefold degrees (got {d_len} and {e_len})")]
    LengthMismatch { d_len: usize, e_len: usize },

    #[error("degree pair is inadmissible: {condition} fails at i={index}")]
    Inadmissible { condition: Condition, index: usize },

    #[error("index {i} is outside 1..={k}")]
    IndexOutOfRange { i: usize, k: usize },

    #[error(
        "leading degree is 1: a degree-1 equation cuts out a smaller projective space, \
         so eliminate it and re-run with the reduced degree sequence"
    )]
    LinearLeadingDegree,

    #[error("closed form requires codimension >= 2 and degree >= 2 (got k={k}, c={c})")]
    ClosedFormRange { k: u32, c: u64 },

    #[error("k=1 oracle requires 1 <= e1 <= e2 <= d (got d={d}, e1={e1}, e2={e2})")]
    OracleRange { d: u64, e1: u64, e2: u64 },

    #[error("invalid search range: {0}")]
    InvalidRange(String),

    #[error("relaxed scan only supports dropping {supported}, not {requested}")]
    UnsupportedDrop {
        requested: Condition,
        supported: Condition,
    },

    #[error("field characteristic {0} is too small for reliable genericity; use a prime >= 101")]
    FieldTooSmall(u64),

    #[error("field characteristic {0} is not prime")]
    FieldNotPrime(u64),

    #[error(
        "field characteristic {p} does not exceed the largest schema degree {deg}; \
         pick a larger prime so that no defining degree vanishes in the coefficient field"
    )]
    FieldDegreeClash { p: u64, deg: u64 },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
