use rand::Rng;

use crate::error::{QuantumError, Result};
use crate::gate::{check_qubits, Basis, Gate, PauliString};
use crate::ops::{psi_generators, psi_state};
use crate::state::{PureState, Subspace};
use crate::tableau::StabilizerTableau;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendKind {
    Statevector,
    Stabilizer,
}

/// A register held by one of the two simulation backends.
#[derive(Debug, Clone, PartialEq)]
pub enum QState {
    Dense(PureState),
    Stabilizer(StabilizerTableau),
}

/// One step of a circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Gate(Gate),
    Measure(usize, Basis),
    MeasurePauli(PauliString),
}

impl QState {
    pub fn zero(n: usize, kind: BackendKind) -> Result<Self> {
        Ok(match kind {
            BackendKind::Statevector => QState::Dense(PureState::zero(n)?),
            BackendKind::Stabilizer => QState::Stabilizer(StabilizerTableau::new(n)),
        })
    }

    pub fn kind(&self) -> BackendKind {
        match self {
            QState::Dense(_) => BackendKind::Statevector,
            QState::Stabilizer(_) => BackendKind::Stabilizer,
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            QState::Dense(s) => s.n_qubits(),
            QState::Stabilizer(t) => t.n_qubits(),
        }
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match self {
            QState::Dense(s) => s.apply(gate),
            QState::Stabilizer(t) => t.apply(gate),
        }
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply(g))
    }

    pub fn measure_qubit<R: Rng + ?Sized>(&mut self, q: usize, basis: Basis, rng: &mut R) -> Result<u8> {
        match self {
            QState::Dense(s) => s.measure_qubit(q, basis, rng),
            QState::Stabilizer(t) => t.measure_qubit(q, basis, rng),
        }
    }

    pub fn measure<R: Rng + ?Sized>(&mut self, qubits: &[usize], basis: Basis, rng: &mut R) -> Result<Vec<u8>> {
        check_qubits(qubits, self.n_qubits())?;
        qubits.iter().map(|&q| self.measure_qubit(q, basis, rng)).collect()
    }

    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &PauliString, rng: &mut R) -> Result<u8> {
        match self {
            QState::Dense(s) => s.measure_pauli(p, rng),
            QState::Stabilizer(t) => t.measure_pauli(p, rng),
        }
    }

    /// Two-outcome projection onto `|ψ_{v,x,h}>` held on `ctl` and `msg`.
    pub fn project_psi<R: Rng + ?Sized>(
        &mut self,
        ctl: usize,
        msg: &[usize],
        v: &[u8],
        x: &[u8],
        h: u8,
        rng: &mut R,
    ) -> Result<(bool, f64)> {
        if v.len() != msg.len() || x.len() != msg.len() {
            return Err(QuantumError::DimensionMismatch { expected: msg.len(), got: v.len().min(x.len()) });
        }
        let mut qubits = vec![ctl];
        qubits.extend_from_slice(msg);
        match self {
            QState::Dense(s) => {
                let phi = psi_state(v, x, h)?;
                s.project(&qubits, Subspace::Rank1(&phi), rng)
            }
            QState::Stabilizer(t) => {
                let gens = psi_generators(t.n_qubits(), ctl, msg, v, x, h)?;
                t.project_stabilizers(&gens, rng)
            }
        }
    }

    /// Two-outcome diagonal projection; see [`StabilizerTableau::project_predicate`]
    /// for the restriction on the stabilizer backend.
    pub fn project_predicate<R: Rng + ?Sized>(
        &mut self,
        qubits: &[usize],
        pred: &mut dyn FnMut(u64) -> bool,
        rng: &mut R,
    ) -> Result<(bool, f64)> {
        match self {
            QState::Dense(s) => s.project(qubits, Subspace::Predicate(pred), rng),
            QState::Stabilizer(t) => t.project_predicate(qubits, pred),
        }
    }

    /// [`QState::project_predicate`] that moves a stabilizer state to the
    /// dense backend when the projection leaves the stabilizer formalism.
    pub fn project_predicate_any<R: Rng + ?Sized>(
        &mut self,
        qubits: &[usize],
        pred: &mut dyn FnMut(u64) -> bool,
        rng: &mut R,
    ) -> Result<(bool, f64)> {
        match self.project_predicate(qubits, pred, rng) {
            Err(QuantumError::NonStabilizerProjection(_)) => {
                *self = QState::Dense(self.to_pure()?);
                self.project_predicate(qubits, pred, rng)
            }
            other => other,
        }
    }

    pub fn to_pure(&self) -> Result<PureState> {
        match self {
            QState::Dense(s) => Ok(s.clone()),
            QState::Stabilizer(t) => t.to_pure_state(),
        }
    }

    /// Runs a circuit and returns every measurement outcome in order.
    pub fn run<R: Rng + ?Sized>(&mut self, ops: &[Op], rng: &mut R) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        for op in ops {
            match op {
                Op::Gate(g) => self.apply(g)?,
                Op::Measure(q, b) => out.push(self.measure_qubit(*q, *b, rng)?),
                Op::MeasurePauli(p) => out.push(self.measure_pauli(p, rng)?),
            }
        }
        Ok(out)
    }
}

/// Runs a Clifford circuit on a fresh `n`-qubit tableau.
pub fn stabilizer_run<R: Rng + ?Sized>(n: usize, ops: &[Op], rng: &mut R) -> Result<Vec<u8>> {
    QState::zero(n, BackendKind::Stabilizer)?.run(ops, rng)
}
