use std::fmt;

use crate::error::{QuantumError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    X(usize),
    Y(usize),
    Z(usize),
    H(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
}

impl Gate {
    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::T(_))
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) => {
                vec![q]
            }
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Cz(a, b) => vec![a, b],
        }
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        check_qubits(&qs, n)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::X(q) => write!(f, "X({q})"),
            Gate::Y(q) => write!(f, "Y({q})"),
            Gate::Z(q) => write!(f, "Z({q})"),
            Gate::H(q) => write!(f, "H({q})"),
            Gate::S(q) => write!(f, "S({q})"),
            Gate::Sdg(q) => write!(f, "Sdg({q})"),
            Gate::T(q) => write!(f, "T({q})"),
            Gate::Cnot { control, target } => write!(f, "CNOT({control},{target})"),
            Gate::Cz(a, b) => write!(f, "CZ({a},{b})"),
        }
    }
}

/// Measurement basis for single-qubit measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Standard,
    Hadamard,
}

impl Basis {
    pub fn from_bit(bit: u8) -> Basis {
        if bit == 0 {
            Basis::Standard
        } else {
            Basis::Hadamard
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Hermitian Pauli product `(-1)^negative * P_0 ⊗ ... ⊗ P_{n-1}`.
///
/// Stored as packed x/z bit masks; `x=z=1` on a qubit denotes Y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    pub(crate) n: usize,
    pub(crate) x: Vec<u64>,
    pub(crate) z: Vec<u64>,
    pub negative: bool,
}

pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString { n, x: vec![0; w], z: vec![0; w], negative: false }
    }

    pub fn from_terms(n: usize, terms: &[(usize, Pauli)], negative: bool) -> Result<Self> {
        let mut p = PauliString::identity(n);
        p.negative = negative;
        let mut seen = Vec::with_capacity(terms.len());
        for &(q, op) in terms {
            if q >= n {
                return Err(QuantumError::QubitOutOfRange { qubit: q, n });
            }
            if seen.contains(&q) {
                return Err(QuantumError::DuplicateQubit(q));
            }
            seen.push(q);
            p.set(q, op);
        }
        Ok(p)
    }

    pub fn z_on(n: usize, q: usize) -> Result<Self> {
        PauliString::from_terms(n, &[(q, Pauli::Z)], false)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn get(&self, q: usize) -> Pauli {
        let (w, b) = (q / 64, q % 64);
        match ((self.x[w] >> b) & 1, (self.z[w] >> b) & 1) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (1, 1) => Pauli::Y,
            _ => Pauli::Z,
        }
    }

    pub fn set(&mut self, q: usize, op: Pauli) {
        let (w, b) = (q / 64, q % 64);
        let (xb, zb) = match op {
            Pauli::I => (0, 0),
            Pauli::X => (1, 0),
            Pauli::Y => (1, 1),
            Pauli::Z => (0, 1),
        };
        self.x[w] = (self.x[w] & !(1 << b)) | (xb << b);
        self.z[w] = (self.z[w] & !(1 << b)) | (zb << b);
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc += ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones();
        }
        acc % 2 == 0
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.get(q) != Pauli::I).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.negative { '-' } else { '+' })?;
        for q in 0..self.n {
            let c = match self.get(q) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub(crate) fn check_qubits(qs: &[usize], n: usize) -> Result<()> {
    for (i, &q) in qs.iter().enumerate() {
        if q >= n {
            return Err(QuantumError::QubitOutOfRange { qubit: q, n });
        }
        if qs[..i].contains(&q) {
            return Err(QuantumError::DuplicateQubit(q));
        }
    }
    Ok(())
}
