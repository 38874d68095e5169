use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A family or operation parameter is outside its admissible range.
    /// The message names the violated constraint, e.g. `n >= 2 required`.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph of order {order} exceeds the size cap of {cap} vertices")]
    SizeCap { order: usize, cap: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric: entries ({row},{col}) differ by {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    #[error("eigensolver did not converge within {max_iter} iterations")]
    NoConvergence { max_iter: usize },

    #[error("eigensolver residual bound {residual:e} exceeds tolerance {tol:e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("multiset sizes differ: {left} vs {right}")]
    CountMismatch { left: usize, right: usize },

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("interlacing needs order(W) = order(P) + {k}, got {order_w} and {order_p}")]
    OrderMismatch {
        order_w: usize,
        order_p: usize,
        k: usize,
    },

    #[error("{0}")]
    NotApplicable(String),

    #[error("A^2 - (k+1)I has nonzero entry {value} at ({row},{col}) across the bipartition")]
    CrossBlock { row: usize, col: usize, value: i64 },

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid graph file: {0}")]
    Validation(String),

    #[error("could not generate a connected subcubic bipartite graph of order {order} after {attempts} attempts")]
    GenerationFailed { order: usize, attempts: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
