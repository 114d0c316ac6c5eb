use thiserror::Error;

/// Errors surfaced by the library. Degenerate polytopes (points, empty
/// intersections) are values, not errors; only precondition violations and
/// genuinely malformed inputs land here.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("configuration must have {expected} entries, got {got}")]
    ConfigLength { expected: usize, got: usize },

    #[error("cannot parse rational {0:?}: expected \"p/q\" with q != 0")]
    ParseRational(String),

    #[error("{0} requires a hypersimplex family (s = n-1)")]
    NotHypersimplex(&'static str),

    #[error("guess_check requires every n*u_i integral: {0}")]
    NonIntegralGrid(String),

    #[error("polytope is unbounded")]
    Unbounded,

    #[error("empty polytope: {0}")]
    EmptyPolytope(String),

    #[error("invalid processing order: {0}")]
    InvalidOrder(String),

    #[error("invalid zone: {0}")]
    InvalidZone(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
