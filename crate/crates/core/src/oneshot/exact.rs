//! Exact small-scale computations behind two statistical properties: the
//! receiver's bit is independent of everything the sender sees, and the
//! coherent mask check rejects mismatched indices.

use eprot_quantum::{make_epr, psi_state, BackendKind, Basis, DensityMatrix, Gate, PureState, QState, Subspace};
use rand::Rng;

use super::receiver::mask_opening;
use super::{pack, CollectionLayout};
use crate::bits::BitString;
use crate::crypto::{commit, CommitKey, Commitment};
use crate::error::{Error, Result};

/// For one collection after the sender's measurements: each sender outcome
/// `(h, v)` with its probability and `Pr[b_i = 0 | outcome]`, the latter read
/// off the reduced density matrix of `R_ctl`.
pub fn collection_table(lambda: usize, x: &BitString, ctl_basis: Basis) -> Result<Vec<(f64, f64)>> {
    let layout = CollectionLayout::new(lambda);
    let QState::Dense(mut st) = make_epr(layout.n_qubits(), &layout.pairs(), BackendKind::Statevector)? else {
        unreachable!("statevector backend")
    };
    for (j, &q) in layout.s_msg.iter().enumerate() {
        if x.bit(j) == 1 {
            st.apply(&Gate::Cnot { control: layout.s_ctl, target: q })?;
        }
    }
    if ctl_basis == Basis::Hadamard {
        st.apply(&Gate::H(layout.s_ctl))?;
    }
    // Sender qubits come first, so each sender outcome owns a contiguous block.
    let n_r = 1 + 2 * lambda;
    let traced: Vec<usize> = (1..n_r).collect();
    let amps = st.amplitudes();
    let mut out = Vec::with_capacity(1 << n_r);
    for block in amps.chunks(1 << n_r) {
        let p: f64 = block.iter().map(|a| a.norm_sqr()).sum();
        if p < 1e-15 {
            out.push((0.0, 0.5));
            continue;
        }
        let r = PureState::normalized(n_r, block.to_vec())?;
        let ctl = DensityMatrix::from_pure(&r).partial_trace(&traced)?;
        out.push((p, ctl.matrix()[(0, 0)].re));
    }
    Ok(out)
}

/// Trace distance between the joint law of (sender outcomes, `b = ⊕ b_i`)
/// and (the same marginal) ⊗ (uniform bit), for one collection per entry of
/// `xs`. The remaining message content is a function of the sender outcomes
/// and independent coins, so it does not change the distance.
pub fn exact_b_uniformity(lambda: usize, xs: &[BitString], ctl_basis: Basis) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::Config("need at least one collection".into()));
    }
    let tables: Vec<Vec<(f64, f64)>> = xs.iter().map(|x| collection_table(lambda, x, ctl_basis)).collect::<Result<_>>()?;
    let mut td = 0.0;
    let mut idx = vec![0usize; tables.len()];
    loop {
        let mut p = 1.0;
        let mut dist = [1.0, 0.0];
        for (t, &k) in tables.iter().zip(&idx) {
            let (pk, q0) = t[k];
            p *= pk;
            dist = [dist[0] * q0 + dist[1] * (1.0 - q0), dist[0] * (1.0 - q0) + dist[1] * q0];
        }
        if p > 0.0 {
            td += 0.5 * p * ((dist[0] - 0.5).abs() + (dist[1] - 0.5).abs());
        }
        let mut pos = 0;
        while pos < idx.len() {
            idx[pos] += 1;
            if idx[pos] < tables[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == idx.len() {
            return Ok(td);
        }
    }
}

/// `2γ·log₂(3/γ) − (1/2 − 2γ)`.
pub fn gamma_bound_exponent(gamma: f64) -> f64 {
    2.0 * gamma * (3.0 / gamma).log2() - (0.5 - 2.0 * gamma)
}

/// How an index's masks are corrupted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mismatch {
    None,
    Branch0,
    Branch1,
    Both,
}

#[derive(Debug, Clone)]
pub struct CoherentBoundCheck {
    /// Exact probability that every coherent projection accepts.
    pub accept: f64,
    /// `2^{n·exponent}` at `γ = 1/30`.
    pub bound: f64,
    /// Indices whose masks fail to open against the reference tuple.
    pub mismatched: usize,
    pub unopened: usize,
}

struct Instance {
    psi: PureState,
    hat_cm: [Commitment; 2],
    z: [BitString; 2],
    mismatch: bool,
}

fn instance<R: Rng + ?Sized>(ck: &CommitKey, delta: &BitString, kind: Mismatch, rng: &mut R) -> Result<Instance> {
    let lambda = ck.lambda();
    let v = BitString::random(2 * lambda, rng);
    let x = BitString::random(2 * lambda, rng);
    let h = rng.random::<bool>() as u8;
    let t = BitString::random(lambda, rng);
    let shifted = t.xor(delta)?;
    let (r0, r1) = (BitString::random(lambda, rng), BitString::random(lambda, rng));
    let flip = BitString::from_u64(1, lambda);
    let c0 = if matches!(kind, Mismatch::Branch0 | Mismatch::Both) { t.xor(&flip)? } else { t.clone() };
    let c1 = if matches!(kind, Mismatch::Branch1 | Mismatch::Both) { shifted.xor(&flip)? } else { shifted.clone() };
    let hat_cm = [commit(ck, &c0, &r0), commit(ck, &c1, &r1)];
    let z = [pack(&t, &r0).xor(&v)?, pack(&shifted, &r1).xor(&v)?.xor(&x)?];
    let vx = v.xor(&x)?;
    let mismatch = mask_opening(ck, &hat_cm[0], &z[0], &v).is_none() || mask_opening(ck, &hat_cm[1], &z[1], &vx).is_none();
    Ok(Instance { psi: psi_state(v.bits(), x.bits(), h)?, hat_cm, z, mismatch })
}

/// Exact acceptance of the coherent mask projection over `unopened`
/// collections, each holding its reference `|ψ>` (so every `Π[γ]` accepts),
/// with the first `mismatched` indices corrupted as `kinds` cycles.
pub fn coherent_acceptance_exact<R: Rng + ?Sized>(
    ck: &CommitKey,
    unopened: usize,
    mismatched: usize,
    kinds: &[Mismatch],
    rng: &mut R,
) -> Result<CoherentBoundCheck> {
    let lambda = ck.lambda();
    let width = 2 * lambda;
    let qubits: Vec<usize> = (0..=width).collect();
    let delta = BitString::random(lambda, rng);
    let mut accept = 1.0;
    let mut count = 0;
    for i in 0..unopened {
        let kind = if i < mismatched && !kinds.is_empty() { kinds[i % kinds.len()] } else { Mismatch::None };
        let mut inst = instance(ck, &delta, kind, rng)?;
        count += usize::from(inst.mismatch);
        let (hat_cm, z) = (inst.hat_cm.clone(), inst.z.clone());
        let mut pred = |u: u64| {
            let b = ((u >> width) & 1) as usize;
            let v = BitString::from_u64(u & ((1u64 << width) - 1), width);
            mask_opening(ck, &hat_cm[b], &z[b], &v).is_some()
        };
        let (_, p) = inst.psi.project(&qubits, Subspace::Predicate(&mut pred), rng)?;
        accept *= p;
    }
    let bound = (unopened as f64 * gamma_bound_exponent(1.0 / 30.0)).exp2();
    Ok(CoherentBoundCheck { accept, bound, mismatched: count, unopened })
}
