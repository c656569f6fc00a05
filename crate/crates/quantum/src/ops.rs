use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::backend::{BackendKind, QState};
use crate::density::DensityMatrix;
use crate::error::{QuantumError, Result};
use crate::gate::{check_qubits, Basis, Gate, Pauli, PauliString};
use crate::state::{IndexSplit, PureState};

/// `n` qubits with a Bell pair `(|00> + |11>)/√2` on each listed pair.
pub fn make_epr(n: usize, pairs: &[(usize, usize)], kind: BackendKind) -> Result<QState> {
    let flat: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
    check_qubits(&flat, n)?;
    let mut s = QState::zero(n, kind)?;
    for &(a, b) in pairs {
        s.apply(&Gate::H(a))?;
        s.apply(&Gate::Cnot { control: a, target: b })?;
    }
    Ok(s)
}

/// Gates preparing `|ψ_{v,x,h}> = (|0,v> + (-1)^h |1,v⊕x>)/√2` from zeros.
pub fn psi_preparation(ctl: usize, msg: &[usize], v: &[u8], x: &[u8], h: u8) -> Vec<Gate> {
    let mut gates = Vec::new();
    for (j, &q) in msg.iter().enumerate() {
        if v[j] & 1 == 1 {
            gates.push(Gate::X(q));
        }
    }
    gates.push(Gate::H(ctl));
    if h & 1 == 1 {
        gates.push(Gate::Z(ctl));
    }
    for (j, &q) in msg.iter().enumerate() {
        if x[j] & 1 == 1 {
            gates.push(Gate::Cnot { control: ctl, target: q });
        }
    }
    gates
}

/// Dense `|ψ_{v,x,h}>` on `1 + |v|` qubits, control first.
pub fn psi_state(v: &[u8], x: &[u8], h: u8) -> Result<PureState> {
    if v.len() != x.len() {
        return Err(QuantumError::DimensionMismatch { expected: v.len(), got: x.len() });
    }
    let k = v.len();
    let msg: Vec<usize> = (1..=k).collect();
    let mut s = PureState::zero(k + 1)?;
    s.apply_all(&psi_preparation(0, &msg, v, x, h))?;
    Ok(s)
}

/// The `1 + |v|` stabilizer generators of `|ψ_{v,x,h}>` embedded in `n` qubits.
pub fn psi_generators(n: usize, ctl: usize, msg: &[usize], v: &[u8], x: &[u8], h: u8) -> Result<Vec<PauliString>> {
    let mut gens = Vec::with_capacity(msg.len() + 1);
    let mut xterm = vec![(ctl, Pauli::X)];
    for (j, &q) in msg.iter().enumerate() {
        let neg = v[j] & 1 == 1;
        if x[j] & 1 == 1 {
            gens.push(PauliString::from_terms(n, &[(ctl, Pauli::Z), (q, Pauli::Z)], neg)?);
            xterm.push((q, Pauli::X));
        } else {
            gens.push(PauliString::from_terms(n, &[(q, Pauli::Z)], neg)?);
        }
    }
    gens.push(PauliString::from_terms(n, &xterm, h & 1 == 1)?);
    Ok(gens)
}

/// Measures `x_qubits` in the Hadamard basis and returns the XOR of the outcomes.
pub fn xor_extract<R: Rng + ?Sized>(state: &mut QState, x_qubits: &[usize], rng: &mut R) -> Result<u8> {
    let bits = state.measure(x_qubits, Basis::Hadamard, rng)?;
    Ok(bits.iter().fold(0, |a, b| a ^ b))
}

/// Exact joint state of the remaining qubits and the extracted parity bit,
/// with the parity as the last qubit.
pub fn xor_extract_exact(psi: &PureState, x_qubits: &[usize]) -> Result<DensityMatrix> {
    let n = psi.n_qubits();
    check_qubits(x_qubits, n)?;
    let k = x_qubits.len();
    let a = n - k;
    let split = IndexSplit::new(n, x_qubits);
    let amps = psi.amplitudes();
    let scale = 1.0 / ((1usize << k) as f64).sqrt();
    let dim = 1usize << (a + 1);
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for s in 0..1usize << k {
        let parity = (s.count_ones() & 1) as usize;
        let mut branch = vec![Complex64::new(0.0, 0.0); 1 << a];
        for u in 0..1usize << k {
            let sign = if (s & u).count_ones() % 2 == 0 { scale } else { -scale };
            for (r, b) in branch.iter_mut().enumerate() {
                *b += amps[split.compose(u, r)] * sign;
            }
        }
        for i in 0..1usize << a {
            for j in 0..1usize << a {
                m[(2 * i + parity, 2 * j + parity)] += branch[i] * branch[j].conj();
            }
        }
    }
    DensityMatrix::from_matrix(a + 1, m)
}
