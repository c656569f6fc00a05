//! One-shot random-receiver-bit string OT over `ℓ` collections of shared
//! EPR pairs, with scripted adversaries, both simulators and the hybrid
//! receiver configurations used in the security argument.
//!
//! Every collection is simulated as its own register of `2(1 + 2λ)` qubits:
//! `S_ctl, S_msg[0..2λ], R_ctl, R_msg[0..2λ]`, with `S_*` paired to `R_*`.

pub mod adversary;
pub mod exact;
pub mod exp2;
pub mod receiver;
pub mod sender;
pub mod setup;
pub mod sim;
pub mod skeleton;

pub use adversary::{adversary_send, AdversaryStrategy, SendOptions};
pub use exp2::{run_exp2, Exp2Outcome};
pub use receiver::{build_gamma_projector, receiver_receive, Gamma, GammaProjector, HybridConfig, ReceiverOutput, Verdict};
pub use sender::{sender_send, SenderSecrets};
pub use setup::{derive_shared_string, setup, PublicSetup, Setup, SetupMode};
pub use sim::{sim_receiver_side, sim_sender_side, ReceiverSimView, SenderSimOutcome, SenderSimOutput};
pub use skeleton::{fresh_collection, skeleton_receiver, skeleton_sender};

use eprot_quantum::RegisterLayout;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::crypto::commit::{encode_list, Commitment};
use crate::crypto::nizk::NizkProof;
use crate::crypto::{ci_hash, CiHashKey, ProductDomain};
use crate::error::Result;

/// Qubit indices of one collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionLayout {
    pub lambda: usize,
    pub s_ctl: usize,
    pub s_msg: Vec<usize>,
    pub r_ctl: usize,
    pub r_msg: Vec<usize>,
    registers: RegisterLayout,
}

impl CollectionLayout {
    pub fn new(lambda: usize) -> Self {
        let mut registers = RegisterLayout::new();
        let s_ctl = registers.add("S_ctl", 1)[0];
        let s_msg = registers.add("S_msg", 2 * lambda);
        let r_ctl = registers.add("R_ctl", 1)[0];
        let r_msg = registers.add("R_msg", 2 * lambda);
        CollectionLayout { lambda, s_ctl, s_msg, r_ctl, r_msg, registers }
    }

    pub fn n_qubits(&self) -> usize {
        self.registers.n_qubits()
    }

    /// `(sender, receiver)` qubit pairs sharing an EPR pair.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = vec![(self.s_ctl, self.r_ctl)];
        out.extend(self.s_msg.iter().copied().zip(self.r_msg.iter().copied()));
        out
    }

    /// `R_ctl` followed by `R_msg`.
    pub fn receiver_qubits(&self) -> Vec<usize> {
        let mut q = vec![self.r_ctl];
        q.extend_from_slice(&self.r_msg);
        q
    }

    pub fn registers(&self) -> &RegisterLayout {
        &self.registers
    }
}

/// Opening of `cm_i` for an index in `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenedTuple {
    pub index: usize,
    pub v: BitString,
    pub x: BitString,
    pub h: u8,
    pub r: BitString,
}

/// Offset commitments and masks for an index outside `T`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaskedTuple {
    pub index: usize,
    pub hat_cm: [Commitment; 2],
    pub z: [BitString; 2],
}

/// The sender's single message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SenderMessage {
    pub cms: Vec<Commitment>,
    pub openings: Vec<OpenedTuple>,
    pub masked: Vec<MaskedTuple>,
    pub proof: NizkProof,
    pub m0_tilde: BitString,
    pub m1_tilde: BitString,
}

impl SenderMessage {
    pub fn hat_cms(&self) -> Vec<[Commitment; 2]> {
        self.masked.iter().map(|m| m.hat_cm.clone()).collect()
    }

    pub fn unopened(&self) -> Vec<usize> {
        self.masked.iter().map(|m| m.index).collect()
    }
}

/// The hashed index set: the product element, the opened indices `T` and
/// the unopened ones, both ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Challenge {
    pub tuple: Vec<Vec<usize>>,
    pub opened: Vec<usize>,
    pub unopened: Vec<usize>,
}

impl Challenge {
    pub fn from_tuple(domain: &ProductDomain, tuple: Vec<Vec<usize>>) -> Self {
        let mut opened = domain.indices(&tuple);
        opened.sort_unstable();
        let ell = domain.c * domain.t;
        let unopened = (0..ell).filter(|i| opened.binary_search(i).is_err()).collect();
        Challenge { tuple, opened, unopened }
    }

    pub fn compute(domain: &ProductDomain, hk: &CiHashKey, cms: &[Commitment]) -> Result<Self> {
        Ok(Challenge::from_tuple(domain, ci_hash(domain, hk, &encode_list(cms))?))
    }
}

/// `t ‖ r` packed into a mask of `2λ` bits.
pub(crate) fn pack(t: &BitString, r: &BitString) -> BitString {
    t.concat(r)
}

/// Inverse of [`pack`].
pub(crate) fn unpack(z: &BitString, lambda: usize) -> (BitString, BitString) {
    (z.slice(0..lambda), z.slice(lambda..2 * lambda))
}
