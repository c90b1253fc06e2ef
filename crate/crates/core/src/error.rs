//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("non-finite entry encountered in {0}")]
    NonFinite(&'static str),

    #[error("representation error: {0}")]
    Representation(String),

    #[error("ion index {ion} out of range for {n_ions} ions")]
    IonIndex { ion: usize, n_ions: usize },

    #[error("truncation error: {0}")]
    Truncation(String),

    #[error("state error: {0}")]
    State(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
