use eprot_quantum::{Basis, QState};
use rand::Rng;

use super::{ReceiverState, SenderState, R0, R1, S0, S1};
use crate::error::Result;

/// Receiver: per index a uniform basis `θ`, both halves measured in it.
pub fn mr_measure<R: Rng + ?Sized>(pairs: &mut [QState], rng: &mut R) -> Result<ReceiverState> {
    let mut theta = Vec::with_capacity(pairs.len());
    let mut v = Vec::with_capacity(pairs.len());
    for st in pairs.iter_mut() {
        let t = rng.random::<bool>() as u8;
        let basis = Basis::from_bit(t);
        v.push([st.measure_qubit(R0, basis, rng)?, st.measure_qubit(R1, basis, rng)?]);
        theta.push(t);
    }
    Ok(ReceiverState { theta, v })
}

/// Sender: each index joins `U` by a fair coin. On `U` both halves are
/// measured in a uniform basis; elsewhere `S0` in the standard basis and
/// `S1` in the Hadamard basis.
pub fn ms_measure<R: Rng + ?Sized>(pairs: &mut [QState], rng: &mut R) -> Result<SenderState> {
    let mut in_u = Vec::with_capacity(pairs.len());
    let mut theta = Vec::with_capacity(pairs.len());
    let mut v = Vec::with_capacity(pairs.len());
    for st in pairs.iter_mut() {
        let u = rng.random::<bool>();
        if u {
            let t = rng.random::<bool>() as u8;
            let basis = Basis::from_bit(t);
            v.push([st.measure_qubit(S0, basis, rng)?, st.measure_qubit(S1, basis, rng)?]);
            theta.push(Some(t));
        } else {
            v.push([st.measure_qubit(S0, Basis::Standard, rng)?, st.measure_qubit(S1, Basis::Hadamard, rng)?]);
            theta.push(None);
        }
        in_u.push(u);
    }
    Ok(SenderState { in_u, theta, v })
}
