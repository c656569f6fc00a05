use eprot_quantum::{make_epr, BackendKind, Basis, Gate, QState};
use rand::Rng;

use super::CollectionLayout;
use crate::bits::BitString;
use crate::error::{Error, Result};

/// `1 + 2λ` EPR pairs between the sender and receiver halves.
pub fn fresh_collection(layout: &CollectionLayout, kind: BackendKind) -> Result<QState> {
    Ok(make_epr(layout.n_qubits(), &layout.pairs(), kind)?)
}

/// Applies the `x`-controlled CNOTs on the sender half and measures it:
/// `S_msg` in the standard basis, then `S_ctl` in `ctl_basis`.
pub(crate) fn sender_measure<R: Rng + ?Sized>(
    state: &mut QState,
    layout: &CollectionLayout,
    x: &BitString,
    ctl_basis: Basis,
    rng: &mut R,
) -> Result<(BitString, u8)> {
    if x.len() != layout.s_msg.len() {
        return Err(Error::Length { expected: layout.s_msg.len(), got: x.len() });
    }
    for (j, &q) in layout.s_msg.iter().enumerate() {
        if x.bit(j) == 1 {
            state.apply(&Gate::Cnot { control: layout.s_ctl, target: q })?;
        }
    }
    let v = state.measure(&layout.s_msg, Basis::Standard, rng)?;
    let h = state.measure_qubit(layout.s_ctl, ctl_basis, rng)?;
    Ok((BitString::from_bits(&v), h))
}

/// Sender half of the skeleton: returns `(v, h)`.
pub fn skeleton_sender<R: Rng + ?Sized>(
    state: &mut QState,
    layout: &CollectionLayout,
    x: &BitString,
    rng: &mut R,
) -> Result<(BitString, u8)> {
    sender_measure(state, layout, x, Basis::Hadamard, rng)
}

/// Receiver half of the skeleton: measures `R` in the standard basis, returning `(b, v')`.
pub fn skeleton_receiver<R: Rng + ?Sized>(state: &mut QState, layout: &CollectionLayout, rng: &mut R) -> Result<(u8, BitString)> {
    let b = state.measure_qubit(layout.r_ctl, Basis::Standard, rng)?;
    let v = state.measure(&layout.r_msg, Basis::Standard, rng)?;
    Ok((b, BitString::from_bits(&v)))
}
