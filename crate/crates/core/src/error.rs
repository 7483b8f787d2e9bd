use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid detuning config: {0}")]
    InvalidDetuning(String),
    #[error("a pulse sequence needs at least one segment")]
    EmptySequence,
    #[error("phase grid is empty")]
    EmptyGrid,
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
}
