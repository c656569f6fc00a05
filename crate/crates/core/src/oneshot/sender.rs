use eprot_quantum::{Basis, QState};
use rand::Rng;

use super::setup::PublicSetup;
use super::skeleton::sender_measure;
use super::{pack, Challenge, MaskedTuple, OpenedTuple, SenderMessage};
use crate::bits::BitString;
use crate::crypto::nizk::{cm_message, sim_prove, CmOpening, MaskOpening};
use crate::crypto::{commit, nizk_prove, prg_expand, Statement, Witness};
use crate::error::{Error, Result};

/// Sender-side randomness and measurement results behind one message.
#[derive(Debug, Clone)]
pub struct SenderSecrets {
    pub seed: BitString,
    pub delta: BitString,
    pub xs: Vec<BitString>,
    /// Measured `v_i`.
    pub v: Vec<BitString>,
    /// Measured `h_i`; for a sender that skips the Hadamard measurement this
    /// is the standard-basis control outcome.
    pub h: Vec<u8>,
    /// The tuples actually committed in `cm_i`.
    pub committed: Vec<(BitString, BitString, u8)>,
    pub coins: Vec<BitString>,
    pub challenge: Challenge,
    /// Mask openings in the order of `challenge.unopened`.
    pub masks: Vec<MaskOpening>,
    /// Offset committed at each unopened index.
    pub offsets: Vec<BitString>,
}

/// Deviations from the honest sender. The default is honest.
#[derive(Debug, Clone, Default)]
pub(crate) struct Script {
    pub ctl_standard: bool,
    pub fake: Vec<usize>,
    pub independent_offsets: bool,
    pub forge_proof: bool,
    pub seed: Option<BitString>,
}

pub(crate) fn build_message<R: Rng + ?Sized>(
    public: &PublicSetup,
    collections: &mut [QState],
    m0: &BitString,
    m1: &BitString,
    script: &Script,
    rng: &mut R,
) -> Result<(SenderMessage, SenderSecrets)> {
    let lambda = public.lambda();
    let ell = public.ell();
    if collections.len() != ell {
        return Err(Error::Length { expected: ell, got: collections.len() });
    }
    for m in [m0, m1] {
        if m.len() != lambda {
            return Err(Error::Length { expected: lambda, got: m.len() });
        }
    }
    let seed = match &script.seed {
        Some(s) if s.len() != lambda => return Err(Error::Length { expected: lambda, got: s.len() }),
        Some(s) => s.clone(),
        None => BitString::random(lambda, rng),
    };
    let prg = prg_expand(&seed, 2 * lambda * ell);
    let xs: Vec<BitString> = (0..ell).map(|i| prg.slice(2 * lambda * i..2 * lambda * (i + 1))).collect();

    let ctl_basis = if script.ctl_standard { Basis::Standard } else { Basis::Hadamard };
    let mut v = Vec::with_capacity(ell);
    let mut h = Vec::with_capacity(ell);
    let mut committed = Vec::with_capacity(ell);
    let mut coins = Vec::with_capacity(ell);
    let mut cms = Vec::with_capacity(ell);
    for (i, state) in collections.iter_mut().enumerate() {
        let (vi, hi) = sender_measure(state, &public.layout, &xs[i], ctl_basis, rng)?;
        let tuple = if script.fake.contains(&i) {
            (BitString::random(2 * lambda, rng), BitString::random(2 * lambda, rng), rng.random::<bool>() as u8)
        } else if script.ctl_standard {
            (vi.clone(), xs[i].clone(), rng.random::<bool>() as u8)
        } else {
            (vi.clone(), xs[i].clone(), hi)
        };
        let r = BitString::random(lambda, rng);
        cms.push(commit(&public.ck, &cm_message(&tuple.0, &tuple.1, tuple.2), &r));
        v.push(vi);
        h.push(hi);
        committed.push(tuple);
        coins.push(r);
    }

    let challenge = Challenge::compute(&public.domain, public.hk()?, &cms)?;
    let delta = BitString::random(lambda, rng);
    let mut masked = Vec::with_capacity(challenge.unopened.len());
    let mut masks = Vec::with_capacity(challenge.unopened.len());
    let mut offsets = Vec::with_capacity(challenge.unopened.len());
    let mut t_sum = BitString::zeros(lambda);
    for &i in &challenge.unopened {
        let (cv, cx, _) = &committed[i];
        let t = BitString::random(lambda, rng);
        let d = if script.independent_offsets { BitString::random(lambda, rng) } else { delta.clone() };
        let shifted = t.xor(&d)?;
        let (r0, r1) = (BitString::random(lambda, rng), BitString::random(lambda, rng));
        let hat_cm = [commit(&public.ck, &t, &r0), commit(&public.ck, &shifted, &r1)];
        let z0 = pack(&t, &r0).xor(cv)?;
        let z1 = pack(&shifted, &r1).xor(cv)?.xor(cx)?;
        t_sum = t_sum.xor(&t)?;
        masked.push(MaskedTuple { index: i, hat_cm, z: [z0, z1] });
        masks.push(MaskOpening { t, r0, r1 });
        offsets.push(d);
    }
    let m0_tilde = m0.xor(&t_sum)?;
    let m1_tilde = m1.xor(&delta)?.xor(&t_sum)?;

    let hat_cms: Vec<_> = masked.iter().map(|m| m.hat_cm.clone()).collect();
    let stmt = Statement { ck: &public.ck, cms: &cms, t_bar: &challenge.unopened, hat_cms: &hat_cms };
    let proof = if script.forge_proof {
        sim_prove(&public.crs, &stmt)
    } else {
        let witness = Witness {
            seed: seed.clone(),
            delta: delta.clone(),
            cm_openings: committed
                .iter()
                .zip(&coins)
                .map(|((cv, _, ch), r)| CmOpening { v: cv.clone(), h: *ch, r: r.clone() })
                .collect(),
            mask_openings: masks.clone(),
        };
        nizk_prove(&public.crs, &stmt, &witness)?
    };

    let openings = challenge
        .opened
        .iter()
        .map(|&i| {
            let (cv, cx, ch) = &committed[i];
            OpenedTuple { index: i, v: cv.clone(), x: cx.clone(), h: *ch, r: coins[i].clone() }
        })
        .collect();
    let msg = SenderMessage { cms, openings, masked, proof, m0_tilde, m1_tilde };
    let secrets = SenderSecrets { seed, delta, xs, v, h, committed, coins, challenge, masks, offsets };
    Ok((msg, secrets))
}

/// The honest sender: measures its halves, commits, answers the hashed
/// challenge and masks `(m0, m1)`.
pub fn sender_send<R: Rng + ?Sized>(
    public: &PublicSetup,
    collections: &mut [QState],
    m0: &BitString,
    m1: &BitString,
    rng: &mut R,
) -> Result<(SenderMessage, SenderSecrets)> {
    build_message(public, collections, m0, m1, &Script::default(), rng)
}
