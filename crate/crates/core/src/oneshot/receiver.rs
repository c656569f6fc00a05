use eprot_quantum::{Basis, QState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::setup::PublicSetup;
use super::{unpack, Challenge, CollectionLayout, MaskedTuple, SenderMessage};
use crate::bits::BitString;
use crate::crypto::nizk::cm_message;
use crate::crypto::{extract, nizk_verify, open_verify, CommitKey, Commitment, ExtractKey, Statement};
use crate::error::Result;
use crate::relations::{parse_tuple, Extracted};

/// Step reported when a hybrid-only `Π[γ]` projection rejects.
pub const GAMMA_STEP: u8 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Accept { b: u8, m_b: BitString },
    Abort { step: u8 },
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accept { .. })
    }

    pub fn failed_step(&self) -> Option<u8> {
        match self {
            Verdict::Abort { step } => Some(*step),
            Verdict::Accept { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceiverOutput {
    pub verdict: Verdict,
    /// Step-2 projection outcome for each opened index, in ascending order.
    pub step2: Vec<bool>,
    /// `(b_i, v'_i)` for each unopened index, when step 4 was reached.
    pub measured: Vec<(u8, BitString)>,
}

impl ReceiverOutput {
    fn abort(step: u8, step2: Vec<bool>, measured: Vec<(u8, BitString)>) -> Self {
        ReceiverOutput { verdict: Verdict::Abort { step }, step2, measured }
    }
}

/// The threshold `γ = num/den` of `Π[γ]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gamma {
    pub num: usize,
    pub den: usize,
}

impl Gamma {
    pub const fn new(num: usize, den: usize) -> Self {
        Gamma { num, den }
    }

    /// `hw(e) < γ·n`.
    pub fn admits(&self, weight: usize, n: usize) -> bool {
        weight * self.den < self.num * n
    }
}

/// Receiver variants used by the hybrid argument. The default is the real receiver.
#[derive(Debug, Clone, Default)]
pub struct HybridConfig {
    /// Replace the step-4 check by a coherent projection onto the accepting
    /// `(b, v')` strings before measuring.
    pub coherent: bool,
    /// `Π[γ]` with extracted references, before the step-4 check.
    pub pre_gamma: Option<Gamma>,
    /// `Π[γ]` with extracted references, after the coherent projection.
    pub post_gamma: Option<Gamma>,
    /// Trapdoor for the extracted references.
    pub ek: Option<ExtractKey>,
}

impl HybridConfig {
    pub fn coherent() -> Self {
        HybridConfig { coherent: true, ..Default::default() }
    }

    /// Coherent check preceded by `Π[1/30]`.
    pub fn pre_gamma(ek: ExtractKey) -> Self {
        HybridConfig { coherent: true, pre_gamma: Some(Gamma::new(1, 30)), post_gamma: None, ek: Some(ek) }
    }

    /// As [`HybridConfig::pre_gamma`], followed by `Π[1/2]`.
    pub fn pre_post_gamma(ek: ExtractKey) -> Self {
        HybridConfig { post_gamma: Some(Gamma::new(1, 2)), ..Self::pre_gamma(ek) }
    }
}

/// `Π[γ, {(v_i, x_i, h_i)}]` over a set of collections, applied as a
/// two-outcome `|ψ>` measurement per collection followed by a weight threshold.
#[derive(Debug, Clone)]
pub struct GammaProjector {
    pub gamma: Gamma,
    pub refs: Vec<(usize, Extracted)>,
}

pub fn build_gamma_projector(gamma: Gamma, refs: Vec<(usize, Extracted)>) -> GammaProjector {
    GammaProjector { gamma, refs }
}

impl GammaProjector {
    /// Returns acceptance and the error string `e`.
    pub fn apply<R: Rng + ?Sized>(
        &self,
        collections: &mut [QState],
        layout: &CollectionLayout,
        rng: &mut R,
    ) -> Result<(bool, Vec<u8>)> {
        let mut e = Vec::with_capacity(self.refs.len());
        for (i, r) in &self.refs {
            let (ok, _) = collections[*i].project_psi(layout.r_ctl, &layout.r_msg, r.v.bits(), r.x.bits(), r.h, rng)?;
            e.push(u8::from(!ok));
        }
        let w = e.iter().filter(|&&b| b == 1).count();
        Ok((self.gamma.admits(w, self.refs.len()), e))
    }
}

/// Whether `z ⊕ v'` opens `hat_cm`; returns the opened `t'`.
pub(crate) fn mask_opening(ck: &CommitKey, hat_cm: &Commitment, z: &BitString, v: &BitString) -> Option<BitString> {
    let (t, r) = unpack(&z.xor(v).ok()?, ck.lambda());
    open_verify(ck, hat_cm, &t, &r).then_some(t)
}

/// Structural and opening checks of step 1; returns the challenge.
pub(crate) fn check_openings(public: &PublicSetup, msg: &SenderMessage) -> Result<Option<Challenge>> {
    let lambda = public.lambda();
    let ell = public.ell();
    if msg.cms.len() != ell || msg.m0_tilde.len() != lambda || msg.m1_tilde.len() != lambda {
        return Ok(None);
    }
    let ch = Challenge::compute(&public.domain, public.hk()?, &msg.cms)?;
    if msg.openings.iter().map(|o| o.index).ne(ch.opened.iter().copied())
        || msg.masked.iter().map(|m| m.index).ne(ch.unopened.iter().copied())
    {
        return Ok(None);
    }
    let ok = msg.openings.iter().all(|o| {
        o.v.len() == 2 * lambda
            && o.x.len() == 2 * lambda
            && o.h <= 1
            && open_verify(&public.ck, &msg.cms[o.index], &cm_message(&o.v, &o.x, o.h), &o.r)
    }) && msg.masked.iter().all(|m| m.z.iter().all(|z| z.len() == 2 * lambda));
    Ok(ok.then_some(ch))
}

fn extracted_refs(public: &PublicSetup, ek: &ExtractKey, msg: &SenderMessage, ch: &Challenge) -> Option<Vec<(usize, Extracted)>> {
    ch.unopened
        .iter()
        .map(|&i| Some((i, parse_tuple(&extract(&public.ck, ek, &msg.cms[i])?, public.lambda())?)))
        .collect()
}

/// Accepting set of the mask check for one unopened collection, as a
/// predicate on the receiver register (`R_ctl` is the MSB).
fn mask_predicate<'a>(public: &'a PublicSetup, m: &'a MaskedTuple) -> impl FnMut(u64) -> bool + 'a {
    let width = public.layout.r_msg.len();
    move |u: u64| {
        let b = ((u >> width) & 1) as usize;
        let v = BitString::from_u64(u & ((1u64 << width) - 1), width);
        mask_opening(&public.ck, &m.hat_cm[b], &m.z[b], &v).is_some()
    }
}

/// One independent stream per unopened collection. Step 4 samples each
/// receiver register in two stages from its stream: the mask-check class
/// first, then the string within it. The sequential and coherent receivers
/// then consume identical randomness per collection.
pub(crate) fn collection_streams<R: Rng + ?Sized>(msg: &SenderMessage, rng: &mut R) -> Vec<ChaCha20Rng> {
    msg.masked.iter().map(|_| ChaCha20Rng::from_seed(rng.random())).collect()
}

/// Coherent projection of every unopened collection onto the `(b, v')`
/// strings that pass the mask check. Returns whether all accepted.
pub(crate) fn coherent_check(
    public: &PublicSetup,
    collections: &mut [QState],
    msg: &SenderMessage,
    streams: &mut [ChaCha20Rng],
) -> Result<bool> {
    let qubits = public.layout.receiver_qubits();
    let mut all = true;
    for (m, s) in msg.masked.iter().zip(streams) {
        let mut pred = mask_predicate(public, m);
        let (ok, _) = collections[m.index].project_predicate_any(&qubits, &mut pred, s)?;
        all &= ok;
    }
    Ok(all)
}

/// Runs receiver steps 1 to 5 on the receiver halves of `collections`.
pub fn receiver_receive<R: Rng + ?Sized>(
    public: &PublicSetup,
    collections: &mut [QState],
    msg: &SenderMessage,
    rng: &mut R,
    config: &HybridConfig,
) -> Result<ReceiverOutput> {
    let layout = &public.layout;
    let Some(ch) = check_openings(public, msg)? else {
        return Ok(ReceiverOutput::abort(1, vec![], vec![]));
    };

    let mut step2 = Vec::with_capacity(ch.opened.len());
    for o in &msg.openings {
        let (ok, _) = collections[o.index].project_psi(layout.r_ctl, &layout.r_msg, o.v.bits(), o.x.bits(), o.h, rng)?;
        step2.push(ok);
    }
    if step2.contains(&false) {
        return Ok(ReceiverOutput::abort(2, step2, vec![]));
    }

    let hat_cms = msg.hat_cms();
    let stmt = Statement { ck: &public.ck, cms: &msg.cms, t_bar: &ch.unopened, hat_cms: &hat_cms };
    if !nizk_verify(&public.crs, &stmt, &msg.proof) {
        return Ok(ReceiverOutput::abort(3, step2, vec![]));
    }

    let gamma_refs = if config.pre_gamma.is_some() || config.post_gamma.is_some() {
        let ek = config.ek.as_ref().ok_or_else(|| crate::error::Error::Config("gamma projection needs an extraction key".into()))?;
        match extracted_refs(public, ek, msg, &ch) {
            Some(r) => Some(r),
            None => return Ok(ReceiverOutput::abort(GAMMA_STEP, step2, vec![])),
        }
    } else {
        None
    };
    if let (Some(g), Some(refs)) = (config.pre_gamma, &gamma_refs) {
        let (ok, _) = build_gamma_projector(g, refs.clone()).apply(collections, layout, rng)?;
        if !ok {
            return Ok(ReceiverOutput::abort(GAMMA_STEP, step2, vec![]));
        }
    }
    let mut streams = collection_streams(msg, rng);
    if config.coherent && !coherent_check(public, collections, msg, &mut streams)? {
        return Ok(ReceiverOutput::abort(4, step2, vec![]));
    }
    if let (Some(g), Some(refs)) = (config.post_gamma, &gamma_refs) {
        let (ok, _) = build_gamma_projector(g, refs.clone()).apply(collections, layout, rng)?;
        if !ok {
            return Ok(ReceiverOutput::abort(GAMMA_STEP, step2, vec![]));
        }
    }

    let lambda = public.lambda();
    let mut measured = Vec::with_capacity(ch.unopened.len());
    let mut t_sum = BitString::zeros(lambda);
    let mut b = 0u8;
    let mut failed = false;
    let qubits = layout.receiver_qubits();
    for (m, s) in msg.masked.iter().zip(&mut streams) {
        let st = &mut collections[m.index];
        if !config.coherent {
            st.project_predicate_any(&qubits, &mut mask_predicate(public, m), s)?;
        }
        let bi = st.measure_qubit(layout.r_ctl, Basis::Standard, s)?;
        let vi = BitString::from_bits(&st.measure(&layout.r_msg, Basis::Standard, s)?);
        match mask_opening(&public.ck, &m.hat_cm[bi as usize], &m.z[bi as usize], &vi) {
            Some(t) => t_sum = t_sum.xor(&t)?,
            None => failed = true,
        }
        b ^= bi;
        measured.push((bi, vi));
    }
    if failed {
        debug_assert!(!config.coherent, "mask check failed after an accepting coherent projection");
        return Ok(ReceiverOutput::abort(4, step2, measured));
    }
    let m_tilde = if b == 0 { &msg.m0_tilde } else { &msg.m1_tilde };
    let m_b = m_tilde.xor(&t_sum)?;
    Ok(ReceiverOutput { verdict: Verdict::Accept { b, m_b }, step2, measured })
}
