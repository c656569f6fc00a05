use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("{requested} qubits requested, limit is {limit}")]
    TooManyQubits { requested: usize, limit: usize },
    #[error("qubit {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("qubit {0} listed twice")]
    DuplicateQubit(usize),
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("sampled branch has squared norm {0}")]
    ZeroNormBranch(f64),
    #[error("gate {0} is not Clifford")]
    NonClifford(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensity(String),
    #[error("qubit {0} is not in a definite basis state")]
    NotClassical(usize),
    #[error("projection leaves the stabilizer formalism (acceptance probability {0})")]
    NonStabilizerProjection(f64),
}

pub type Result<T> = std::result::Result<T, QuantumError>;
