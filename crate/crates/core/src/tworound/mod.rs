//! Two-round chosen-input OT over BB84-style measurements of shared EPR
//! pairs. The first round is split into a committed part (`ot1_c`,
//! `ot2_c`: commitments and the hashed cut-and-choose) and a
//! non-committed part (`ot1_nc`, `ot2_nc`, `ot3`: bit algebra plus the
//! universal hash).
//!
//! Index `i` owns two EPR pairs held on four qubits `S0, S1, R0, R1`.

pub mod amplification;
pub mod c;
pub mod measure;
pub mod nc;
pub mod sim;

pub use amplification::{conjugate_tail, privacy_amplification_check, zero_input_probability, PaReport};
pub use c::{ot1_c, ot2_c};
pub use measure::{mr_measure, ms_measure};
pub use nc::{ot1_nc, ot2_nc, ot3, selection_strings};
pub use sim::{sim_eq, SimEq};

use eprot_quantum::{make_epr, BackendKind, QState};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::crypto::{ci_gen, ext_gen, CiHashKey, CommitKey, Commitment, ExtractKey, Group, ProductDomain, UHashKey};
use crate::error::{Error, Result};
use crate::oneshot::setup::{derive_shared_string, keys_from_shared, SHARED_SEED_BITS};
use crate::oneshot::SetupMode;
use crate::relations::ProtocolParams;

pub const S0: usize = 0;
pub const S1: usize = 1;
pub const R0: usize = 2;
pub const R1: usize = 3;
pub const PAIR_QUBITS: usize = 4;

/// Four qubits in `|0000>`, for directly prepared registers.
pub fn fresh_pairs_zero(kind: BackendKind) -> Result<QState> {
    Ok(QState::zero(PAIR_QUBITS, kind)?)
}

/// Public keys of a two-round instance.
#[derive(Debug, Clone)]
pub struct TwoRoundSetup {
    pub params: ProtocolParams,
    pub ck: CommitKey,
    pub hk: Option<CiHashKey>,
    pub domain: ProductDomain,
}

impl TwoRoundSetup {
    pub fn hk(&self) -> Result<&CiHashKey> {
        self.hk.as_ref().ok_or_else(|| Error::Config("hash key has not been programmed".into()))
    }
}

#[derive(Debug, Clone)]
pub struct TwoRoundInstance {
    pub public: TwoRoundSetup,
    pub ek: Option<ExtractKey>,
    pub pairs: Vec<QState>,
    pub mode: SetupMode,
}

/// Two fresh EPR pairs `(S0, R0)` and `(S1, R1)`.
pub fn fresh_pairs(kind: BackendKind) -> Result<QState> {
    Ok(make_epr(PAIR_QUBITS, &[(S0, R0), (S1, R1)], kind)?)
}

pub fn setup_tworound<R: Rng + ?Sized>(
    params: &ProtocolParams,
    mode: SetupMode,
    kind: BackendKind,
    rng: &mut R,
) -> Result<TwoRoundInstance> {
    params.validate()?;
    let group = Group::standard(params.group_bits)?;
    let domain = ProductDomain::new(params.c, params.t)?;
    let (ck, ek, hk) = match mode {
        SetupMode::HonestCrs => {
            let (s, _) = derive_shared_string(SHARED_SEED_BITS, rng)?;
            let (ck, _, hk) = keys_from_shared(params, group, &domain, &s.to_bytes());
            (ck, None, Some(hk))
        }
        SetupMode::ExtractMode => {
            let (ck, ek) = ext_gen(group, params.lambda, rng);
            let hk = ci_gen(&domain, params.lambda_ci, rng);
            (ck, Some(ek), Some(hk))
        }
        SetupMode::ProgrammedHk => (CommitKey::honest(group, params.lambda, rng), None, None),
    };
    let pairs = (0..params.ell()).map(|_| fresh_pairs(kind)).collect::<Result<Vec<_>>>()?;
    Ok(TwoRoundInstance { public: TwoRoundSetup { params: params.clone(), ck, hk, domain }, ek, pairs, mode })
}

/// `σ_R`: a basis and two outcomes per index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceiverState {
    pub theta: Vec<u8>,
    pub v: Vec<[u8; 2]>,
}

/// `σ_S`: the checked set `U`, bases on `U` and two outcomes per index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SenderState {
    pub in_u: Vec<bool>,
    pub theta: Vec<Option<u8>>,
    pub v: Vec<[u8; 2]>,
}

impl SenderState {
    pub fn u(&self) -> Vec<usize> {
        (0..self.in_u.len()).filter(|&i| self.in_u[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaEntry {
    pub index: usize,
    pub theta: u8,
    pub value: u8,
}

/// `ω`: basis and kept value for each unopened index, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Omega(pub Vec<OmegaEntry>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleOpening {
    pub index: usize,
    pub theta: u8,
    pub v0: u8,
    pub v1: u8,
    pub r: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ots1C {
    pub cms: Vec<Commitment>,
    pub t: Vec<Vec<usize>>,
    pub openings: Vec<TripleOpening>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffsetBit {
    pub index: usize,
    pub d: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ots1NC(pub Vec<OffsetBit>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ots2 {
    pub s: UHashKey,
    pub u: Vec<usize>,
    pub m0_tilde: BitString,
    pub m1_tilde: BitString,
}

/// Result of the sender's committed-part check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ot2cVerdict {
    Accept,
    /// 1: hash recomputation, 2: opening verification, 3: consistent-index values.
    Reject { condition: u8 },
}

/// Everything one honest run produces.
#[derive(Debug, Clone)]
pub struct TwoRoundRun {
    pub sigma_r: ReceiverState,
    pub sigma_s: SenderState,
    pub ots1c: Ots1C,
    pub ots1nc: Ots1NC,
    pub omega: Omega,
    pub check: Ot2cVerdict,
    pub ots2: Option<Ots2>,
    pub output: Option<BitString>,
}

/// Honest receiver with choice `b` against the honest sender with `(m0, m1)`.
pub fn run_honest<R: Rng + ?Sized>(
    inst: &mut TwoRoundInstance,
    b: u8,
    m0: &BitString,
    m1: &BitString,
    rng: &mut R,
) -> Result<TwoRoundRun> {
    let sigma_r = mr_measure(&mut inst.pairs, rng)?;
    let (ots1c, omega, _) = ot1_c(&inst.public, &sigma_r, rng)?;
    let ots1nc = ot1_nc(b, &omega);
    let sigma_s = ms_measure(&mut inst.pairs, rng)?;
    let check = ot2_c(&inst.public, &sigma_s, &ots1c)?;
    let (ots2, output) = if check == Ot2cVerdict::Accept {
        let ots2 = ot2_nc(&sigma_s, &ots1nc, m0, m1, rng)?;
        let out = ot3(&ots2, b, &omega)?;
        (Some(ots2), Some(out))
    } else {
        (None, None)
    };
    Ok(TwoRoundRun { sigma_r, sigma_s, ots1c, ots1nc, omega, check, ots2, output })
}
