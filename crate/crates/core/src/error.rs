use thiserror::Error;

use crate::exactalg::ExactError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("groups or depths do not match")]
    SpecMismatch,
    #[error("operation requires the {expected} convention")]
    ConventionMismatch { expected: &'static str },
    #[error("component at depth {depth} uses variable x{var}")]
    VariableEscape { depth: usize, var: u32 },
    #[error("mould is not in ARI (empty component must be 0)")]
    NotInARI,
    #[error("mould is not in GARI (empty component must be 1)")]
    NotInGARI,
    #[error("word of length {len} exceeds mould depth {depth}")]
    DepthExceeded { len: usize, depth: usize },
    #[error("flexion needs a nonempty absorbing word")]
    EmptyAbsorber,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
