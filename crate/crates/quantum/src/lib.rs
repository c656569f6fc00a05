//! Quantum state simulation for EPR-pair protocols.
//!
//! Two interchangeable backends share one outcome-sampling rule: a dense
//! statevector (up to 22 qubits) and an Aaronson–Gottesman stabilizer
//! tableau restricted to Clifford operations. Seeded runs of a Clifford
//! circuit give identical outcomes on both.

mod backend;
pub mod checks;
mod density;
mod error;
mod gate;
mod layout;
mod ops;
mod sample;
mod state;
mod tableau;

pub use backend::{stabilizer_run, BackendKind, Op, QState};
pub use density::{classical_distance, trace_distance, DensityMatrix};
pub use error::{QuantumError, Result};
pub use gate::{Basis, Gate, Pauli, PauliString};
pub use layout::RegisterLayout;
pub use ops::{make_epr, psi_generators, psi_preparation, psi_state, xor_extract, xor_extract_exact};
pub use sample::{sample_bit, AMP_EPS, PROB_EPS, STATE_TOL};
pub use state::{PureState, Subspace, MAX_DENSE_QUBITS};
pub use tableau::StabilizerTableau;

pub use nalgebra::DMatrix;
pub use num_complex::Complex64;
