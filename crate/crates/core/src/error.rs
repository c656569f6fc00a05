use eprot_quantum::QuantumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    Length { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("witness does not satisfy the statement")]
    BadWitness,
    #[error("transcript schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
