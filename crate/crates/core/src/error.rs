use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("not a cocycle: coboundary is nonzero at {tuple:?}")]
    NotCocycle { tuple: Vec<usize> },
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(
        "instance too large for a dense table: {entries} entries exceeds the cap of {cap}; {hint}"
    )]
    TooLarge {
        entries: u128,
        cap: u128,
        hint: String,
    },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, Error>;
