use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("generator gave up after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("too large: {what} is {size}, limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("edge ({0}, {1}) is not in the graph")]
    EdgeNotFound(usize, usize),

    #[error("contraction budget exceeded: estimated cost {estimated:.3e} > budget {budget:.3e}")]
    BudgetExceeded { estimated: f64, budget: f64 },

    #[error("tree D={degree} p={depth} with {vertices} vertices is infeasible: {reason}")]
    TreeInfeasible {
        degree: usize,
        depth: usize,
        vertices: usize,
        reason: String,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
