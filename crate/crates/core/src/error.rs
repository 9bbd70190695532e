use thiserror::Error;

/// Errors raised by the library. Every operation is a pure function, so an
/// error always describes a bad input or an exceeded cap, never a transient
/// condition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{0} is not squarefree")]
    NotSquarefree(u64),

    #[error("residue {a} is outside Z_{n}")]
    ResidueOutOfRange { a: u64, n: u64 },

    #[error("{d} does not divide the radical {radical}")]
    NotRadicalDivisor { d: u64, radical: u64 },

    #[error("the empty set is not a valid candidate generating set")]
    EmptySet,

    #[error("n = {n} exceeds the dense limit {limit}; use the quotient-level operations instead")]
    DenseLimit { n: u64, limit: u64 },

    #[error("quotient order 2^{omega} exceeds the supported maximum of 64")]
    QuotientTooLarge { omega: u32 },

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})"
    )]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix entry at ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("oracle cap exceeded for {check}: {detail}")]
    OracleCap { check: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
