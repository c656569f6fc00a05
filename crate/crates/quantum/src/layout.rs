use crate::error::{QuantumError, Result};

/// Named qubit registers laid out contiguously in allocation order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegisterLayout {
    registers: Vec<(String, Vec<usize>)>,
    n: usize,
}

impl RegisterLayout {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a register of `len` qubits and returns its indices.
    pub fn add(&mut self, name: &str, len: usize) -> Vec<usize> {
        let qs: Vec<usize> = (self.n..self.n + len).collect();
        self.n += len;
        self.registers.push((name.to_string(), qs.clone()));
        qs
    }

    pub fn qubits(&self, name: &str) -> Result<&[usize]> {
        self.registers
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, q)| q.as_slice())
            .ok_or(QuantumError::QubitOutOfRange { qubit: usize::MAX, n: self.n })
    }

    /// The single qubit of a one-qubit register.
    pub fn qubit(&self, name: &str) -> Result<usize> {
        Ok(self.qubits(name)?[0])
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.registers.iter().map(|(n, _)| n.as_str())
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }
}
