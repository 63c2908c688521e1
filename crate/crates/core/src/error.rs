use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong inside the engine.
///
/// Several variants are correctness traps rather than user errors: they fire
/// only if an identity that must hold (two recurrence branches agreeing, a
/// triangular element being bar-invariant, ...) is violated by the computation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not divisible: {0}")]
    NotDivisible(String),

    #[error("element is not Laurent in cluster {m}: {reason}")]
    NotLaurent { m: i64, reason: String },

    #[error("element is not pointed: {0}")]
    NotPointed(String),

    #[error(
        "recurrence branches disagree at (p,q)=({p},{q}) for (b,c)=({b},{c}), a=({a1},{a2}): first={first}, second={second}"
    )]
    InternalInconsistency {
        b: i64,
        c: i64,
        a1: i64,
        a2: i64,
        p: i64,
        q: i64,
        first: String,
        second: String,
    },

    #[error("expansion index ({0},{1}) is not strictly below the pointing vector ({2},{3})")]
    OrderViolation(i64, i64, i64, i64),

    #[error("triangular element C[{0},{1}] is not bar-invariant")]
    P1Violation(i64, i64),

    #[error("triangular element C[{a1},{a2}]: coefficient of M[{i},{j}] is {coeff}, not in vZ[v]")]
    P2Violation {
        a1: i64,
        a2: i64,
        i: i64,
        j: i64,
        coeff: String,
    },

    #[error("standard-monomial peeling did not terminate after {0} steps")]
    NonTermination(usize),

    #[error("cache error at {path}: {source}")]
    Cache {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
