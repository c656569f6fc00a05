use eprot_quantum::{psi_preparation, BackendKind, Gate, QState};
use rand::Rng;

use super::adversary::{adversary_send, AdversaryStrategy, SendOptions};
use super::receiver::{check_openings, coherent_check, collection_streams};
use super::sender::SenderSecrets;
use super::setup::{setup, PublicSetup, SetupMode};
use super::{pack, Challenge, CollectionLayout, MaskedTuple, OpenedTuple, SenderMessage};
use crate::bits::BitString;
use crate::crypto::nizk::cm_message;
use crate::crypto::prf::random_below;
use crate::crypto::{ci_samp, commit, encode_list, extract, nizk_sim, nizk_verify, CommitKey, ExtractKey, Group, ProductDomain, Statement};
use crate::error::{Error, Result};
use crate::relations::ProtocolParams;

/// Result of the sender-side simulator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SenderSimOutcome {
    /// Inputs handed to the ideal functionality.
    Extracted { m0: BitString, m1: BitString },
    /// A receiver check failed at the given step.
    ReceiverAbort { step: u8 },
    ExtractionFailed { index: usize },
    NoCommonOffset,
}

#[derive(Debug, Clone)]
pub struct SenderSimOutput {
    pub outcome: SenderSimOutcome,
    pub message: SenderMessage,
    pub secrets: SenderSecrets,
    /// The adversary's inputs, for comparison with what was extracted.
    pub inputs: (BitString, BitString),
}

/// Extraction of the sender's inputs from one message: receiver steps 1
/// to 3, the coherent mask projection, then `t_{i,0}, t_{i,1}` from the
/// offset commitments and the common-offset check.
pub fn extract_sender_inputs<R: Rng + ?Sized>(
    public: &PublicSetup,
    ek: &ExtractKey,
    collections: &mut [QState],
    msg: &SenderMessage,
    rng: &mut R,
) -> Result<SenderSimOutcome> {
    let layout = &public.layout;
    let Some(ch) = check_openings(public, msg)? else {
        return Ok(SenderSimOutcome::ReceiverAbort { step: 1 });
    };
    for o in &msg.openings {
        let (ok, _) = collections[o.index].project_psi(layout.r_ctl, &layout.r_msg, o.v.bits(), o.x.bits(), o.h, rng)?;
        if !ok {
            return Ok(SenderSimOutcome::ReceiverAbort { step: 2 });
        }
    }
    let hat_cms = msg.hat_cms();
    let stmt = Statement { ck: &public.ck, cms: &msg.cms, t_bar: &ch.unopened, hat_cms: &hat_cms };
    if !nizk_verify(&public.crs, &stmt, &msg.proof) {
        return Ok(SenderSimOutcome::ReceiverAbort { step: 3 });
    }
    let mut streams = collection_streams(msg, rng);
    if !coherent_check(public, collections, msg, &mut streams)? {
        return Ok(SenderSimOutcome::ReceiverAbort { step: 4 });
    }
    let lambda = public.lambda();
    let mut t0_sum = BitString::zeros(lambda);
    let mut common: Option<BitString> = None;
    let mut consistent = true;
    for m in &msg.masked {
        let get = |k: usize| extract(&public.ck, ek, &m.hat_cm[k]).filter(|t| t.len() == lambda);
        let (Some(t0), Some(t1)) = (get(0), get(1)) else {
            return Ok(SenderSimOutcome::ExtractionFailed { index: m.index });
        };
        let d = t0.xor(&t1)?;
        match &common {
            None => common = Some(d),
            Some(c) => consistent &= *c == d,
        }
        t0_sum = t0_sum.xor(&t0)?;
    }
    if !consistent {
        return Ok(SenderSimOutcome::NoCommonOffset);
    }
    let delta = common.unwrap_or_else(|| BitString::zeros(lambda));
    Ok(SenderSimOutcome::Extracted { m0: msg.m0_tilde.xor(&t0_sum)?, m1: msg.m1_tilde.xor(&delta)?.xor(&t0_sum)? })
}

/// Runs `strategy` on inputs `(m0, m1)` against an extract-mode setup and
/// extracts the inputs it effectively sent.
pub fn sim_sender_side<R: Rng + ?Sized>(
    params: &ProtocolParams,
    strategy: AdversaryStrategy,
    m0: &BitString,
    m1: &BitString,
    kind: BackendKind,
    rng: &mut R,
) -> Result<SenderSimOutput> {
    let mut st = setup(params, SetupMode::ExtractMode, kind, rng)?;
    let ek = st.ek.clone().expect("extract mode keeps the trapdoor");
    let (message, secrets) = adversary_send(strategy, &st.public, &mut st.collections, m0, m1, &SendOptions::default(), rng)?;
    let outcome = extract_sender_inputs(&st.public, &ek, &mut st.collections, &message, rng)?;
    Ok(SenderSimOutput { outcome, message, secrets, inputs: (m0.clone(), m1.clone()) })
}

/// What the simulator hands to a receiver: public setup, the receiver
/// registers (inside otherwise idle collections) and the message.
#[derive(Debug, Clone)]
pub struct ReceiverSimView {
    pub public: PublicSetup,
    pub collections: Vec<QState>,
    pub message: SenderMessage,
    pub challenge: Challenge,
    /// `b_i` planted at each unopened index.
    pub planted_bits: Vec<u8>,
}

fn uniform_tuple<R: Rng + ?Sized>(domain: &ProductDomain, rng: &mut R) -> Result<Vec<Vec<usize>>> {
    domain.unrank(&random_below(&domain.size, rng))
}

fn prepared_collection(layout: &CollectionLayout, kind: BackendKind, gates: &[Gate]) -> Result<QState> {
    let mut st = QState::zero(layout.n_qubits(), kind)?;
    st.apply_all(gates)?;
    Ok(st)
}

/// Simulated receiver view for ideal output `(b, m_b)`: uniform `T`,
/// commitments to zero outside `T`, directly prepared registers, parity-
/// constrained `b_i`, a simulated proof and a programmed hash key.
pub fn sim_receiver_side<R: Rng + ?Sized>(
    params: &ProtocolParams,
    b: u8,
    m_b: &BitString,
    kind: BackendKind,
    rng: &mut R,
) -> Result<ReceiverSimView> {
    params.validate()?;
    let lambda = params.lambda;
    if m_b.len() != lambda || b > 1 {
        return Err(Error::Length { expected: lambda, got: m_b.len() });
    }
    let group = Group::standard(params.group_bits)?;
    let domain = ProductDomain::new(params.c, params.t)?;
    let layout = CollectionLayout::new(lambda);
    let ck = CommitKey::honest(group, lambda, rng);
    let ell = params.ell();

    let challenge = Challenge::from_tuple(&domain, uniform_tuple(&domain, rng)?);
    let mut cms = Vec::with_capacity(ell);
    let mut collections = Vec::with_capacity(ell);
    let mut openings = Vec::with_capacity(challenge.opened.len());
    let zero_tuple = BitString::zeros(4 * lambda + 1);
    for i in 0..ell {
        let r = BitString::random(lambda, rng);
        if challenge.opened.binary_search(&i).is_ok() {
            let v = BitString::random(2 * lambda, rng);
            let x = BitString::random(2 * lambda, rng);
            let h = rng.random::<bool>() as u8;
            cms.push(commit(&ck, &cm_message(&v, &x, h), &r));
            let gates = psi_preparation(layout.r_ctl, &layout.r_msg, v.bits(), x.bits(), h);
            collections.push(prepared_collection(&layout, kind, &gates)?);
            openings.push(OpenedTuple { index: i, v, x, h, r });
        } else {
            cms.push(commit(&ck, &zero_tuple, &r));
            collections.push(QState::zero(layout.n_qubits(), kind)?);
        }
    }

    let k = challenge.unopened.len();
    let mut bits: Vec<u8> = (0..k).map(|_| rng.random::<bool>() as u8).collect();
    if k > 0 {
        bits[k - 1] = b ^ bits[..k - 1].iter().fold(0, |a, x| a ^ x);
    }
    let mut masked = Vec::with_capacity(k);
    let mut t_sum = BitString::zeros(lambda);
    for (&i, &bi) in challenge.unopened.iter().zip(&bits) {
        let v = BitString::random(2 * lambda, rng);
        let t = BitString::random(lambda, rng);
        let r = BitString::random(lambda, rng);
        let real = commit(&ck, &t, &r);
        let dummy = commit(&ck, &BitString::zeros(lambda), &BitString::random(lambda, rng));
        let z_real = pack(&t, &r).xor(&v)?;
        let z_dummy = BitString::random(2 * lambda, rng);
        let (hat_cm, z) = if bi == 0 { ([real, dummy], [z_real, z_dummy]) } else { ([dummy, real], [z_dummy, z_real]) };
        masked.push(MaskedTuple { index: i, hat_cm, z });
        t_sum = t_sum.xor(&t)?;
        let mut gates = Vec::new();
        if bi == 1 {
            gates.push(Gate::X(layout.r_ctl));
        }
        gates.extend(layout.r_msg.iter().zip(v.bits()).filter(|(_, &bit)| bit == 1).map(|(&q, _)| Gate::X(q)));
        collections[i].apply_all(&gates)?;
    }

    let hat_cms: Vec<_> = masked.iter().map(|m| m.hat_cm.clone()).collect();
    let stmt = Statement { ck: &ck, cms: &cms, t_bar: &challenge.unopened, hat_cms: &hat_cms };
    let (crs, proof) = nizk_sim(&stmt, rng);
    let hk = ci_samp(&domain, params.lambda_ci, &encode_list(&cms), &challenge.tuple, rng)?;

    let real_tilde = m_b.xor(&t_sum)?;
    let other_tilde = BitString::random(lambda, rng);
    let (m0_tilde, m1_tilde) = if b == 0 { (real_tilde, other_tilde) } else { (other_tilde, real_tilde) };
    let message = SenderMessage { cms, openings, masked, proof, m0_tilde, m1_tilde };
    let public = PublicSetup { params: params.clone(), layout, ck, crs, hk: Some(hk), domain };
    Ok(ReceiverSimView { public, collections, message, challenge, planted_bits: bits })
}
