use thiserror::Error;

use crate::admissibility::Verdict;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("index {index} outside {range}")]
    InvalidIndex { index: usize, range: &'static str },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("incompatible lattices: {0}")]
    IncompatibleLattice(String),

    #[error("window function is identically zero")]
    ZeroWindow,

    #[error("missing parameter `{0}`")]
    Missing(&'static str),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("empty ensemble")]
    EmptyEnsemble,

    #[error("degenerate range: {0}")]
    DegenerateRange(String),

    #[error("cone mesh is empty")]
    EmptyMesh,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("inadmissible parameters (clause {})", .0.clause)]
    Inadmissible(Box<Verdict>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
