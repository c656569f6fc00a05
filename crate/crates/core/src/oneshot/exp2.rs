use eprot_quantum::{BackendKind, Basis, Gate};
use rand::Rng;

use super::adversary::{adversary_send, AdversaryStrategy, SendOptions};
use super::setup::{setup, SetupMode};
use crate::bits::BitString;
use crate::crypto::prg_expand;
use crate::error::Result;
use crate::relations::{OneShotRelation, ProtocolParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exp2Outcome {
    /// The experiment's output bit.
    pub output: bool,
    /// Condition (i): the extracted offsets equal `PRG(s*)`.
    pub seed_match: bool,
    /// Every commitment extracted.
    pub extracted: bool,
    /// Disagreements with `(v*, h*)` over the unopened indices.
    pub disagreements: usize,
    /// Whether the commitments and the hashed `T` are in the relation.
    pub related: bool,
}

/// One run of the seed-guessing experiment: guess `s*`, measure the
/// receiver halves under `PRG(s*)`, run the sender strategy, extract, and
/// output 1 iff the offsets match, the opened indices agree with the
/// receiver's outcomes and at least `|T̄|/30` unopened indices disagree.
/// With `force_seed` the strategy is handed `s*` as its PRG seed.
pub fn run_exp2<R: Rng + ?Sized>(
    params: &ProtocolParams,
    strategy: AdversaryStrategy,
    force_seed: bool,
    kind: BackendKind,
    rng: &mut R,
) -> Result<Exp2Outcome> {
    let mut st = setup(params, SetupMode::ExtractMode, kind, rng)?;
    let ek = st.ek.clone().expect("extract mode keeps the trapdoor");
    let lambda = params.lambda;
    let ell = params.ell();
    let layout = st.public.layout.clone();

    let s_star = BitString::random(lambda, rng);
    let prg = prg_expand(&s_star, 2 * lambda * ell);
    let mut v_star = Vec::with_capacity(ell);
    let mut h_star = Vec::with_capacity(ell);
    for (i, col) in st.collections.iter_mut().enumerate() {
        let x = prg.slice(2 * lambda * i..2 * lambda * (i + 1));
        for (j, &q) in layout.r_msg.iter().enumerate() {
            if x.bit(j) == 1 {
                col.apply(&Gate::Cnot { control: layout.r_ctl, target: q })?;
            }
        }
        h_star.push(col.measure_qubit(layout.r_ctl, Basis::Hadamard, rng)?);
        v_star.push(BitString::from_bits(&col.measure(&layout.r_msg, Basis::Standard, rng)?));
    }

    let opts = SendOptions { seed: force_seed.then(|| s_star.clone()) };
    let (m0, m1) = (BitString::random(lambda, rng), BitString::random(lambda, rng));
    let (msg, secrets) = adversary_send(strategy, &st.public, &mut st.collections, &m0, &m1, &opts, rng)?;
    let ch = secrets.challenge;

    let relation = OneShotRelation { ck: st.public.ck.clone(), ek, s_star, v_star, h_star, c: params.c, t: params.t };
    let related = relation.in_relation(&msg.cms, &ch.tuple);
    let Some(ext) = relation.extract_all(&msg.cms) else {
        return Ok(Exp2Outcome { output: false, seed_match: false, extracted: false, disagreements: 0, related });
    };
    let seed_match = ext.iter().enumerate().all(|(i, e)| e.x == prg.slice(2 * lambda * i..2 * lambda * (i + 1)));
    let agrees = |i: usize| ext[i].v == relation.v_star[i] && ext[i].h == relation.h_star[i];
    let opened_agree = ch.opened.iter().all(|&i| agrees(i));
    let disagreements = ch.unopened.iter().filter(|&&i| !agrees(i)).count();
    let output = seed_match && opened_agree && 30 * disagreements >= ch.unopened.len();
    Ok(Exp2Outcome { output, seed_match, extracted: true, disagreements, related })
}
