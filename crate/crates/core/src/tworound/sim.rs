use eprot_quantum::{BackendKind, Gate, QState};
use rand::Rng;

use super::c::triple;
use super::{fresh_pairs_zero, Omega, OmegaEntry, OffsetBit, Ots1C, Ots1NC, TripleOpening, TwoRoundSetup, S0, S1};
use crate::bits::BitString;
use crate::crypto::prf::random_below;
use crate::crypto::{ci_samp, commit, encode_list, CommitKey, Group, ProductDomain};
use crate::error::Result;
use crate::oneshot::Challenge;
use crate::relations::ProtocolParams;

/// An equivocal first message with secrets for both choice bits.
#[derive(Debug, Clone)]
pub struct SimEq {
    pub public: TwoRoundSetup,
    /// Sender registers, prepared directly.
    pub pairs: Vec<QState>,
    pub ots1c: Ots1C,
    pub ots1nc: Ots1NC,
    pub omega0: Omega,
    pub omega1: Omega,
    /// The sampled `(θ, v0, v1)` per index.
    pub refs: Vec<[u8; 3]>,
}

fn prepare(st: &mut QState, q: usize, value: u8, hadamard: bool) -> Result<()> {
    if value == 1 {
        st.apply(&Gate::X(q))?;
    }
    if hadamard {
        st.apply(&Gate::H(q))?;
    }
    Ok(())
}

pub fn sim_eq<R: Rng + ?Sized>(params: &ProtocolParams, kind: BackendKind, rng: &mut R) -> Result<SimEq> {
    params.validate()?;
    let ell = params.ell();
    let group = Group::standard(params.group_bits)?;
    let domain = ProductDomain::new(params.c, params.t)?;
    let ck = CommitKey::honest(group, params.lambda, rng);
    let refs: Vec<[u8; 3]> =
        (0..ell).map(|_| [rng.random::<bool>() as u8, rng.random::<bool>() as u8, rng.random::<bool>() as u8]).collect();
    let ch = Challenge::from_tuple(&domain, domain.unrank(&random_below(&domain.size, rng))?);

    let mut cms = Vec::with_capacity(ell);
    let mut pairs = Vec::with_capacity(ell);
    let mut openings = Vec::new();
    for (i, &[theta, v0, v1]) in refs.iter().enumerate() {
        let r = BitString::random(params.lambda, rng);
        let mut st = fresh_pairs_zero(kind)?;
        if ch.opened.binary_search(&i).is_ok() {
            cms.push(commit(&ck, &triple(theta, v0, v1), &r));
            prepare(&mut st, S0, v0, theta == 1)?;
            prepare(&mut st, S1, v1, theta == 1)?;
            openings.push(TripleOpening { index: i, theta, v0, v1, r });
        } else {
            cms.push(commit(&ck, &triple(0, 0, 0), &r));
            prepare(&mut st, S0, v0, false)?;
            prepare(&mut st, S1, v1, true)?;
        }
        pairs.push(st);
    }
    let hk = ci_samp(&domain, params.lambda_ci, &encode_list(&cms), &ch.tuple, rng)?;
    let omega = |flip: usize| {
        Omega(
            ch.unopened
                .iter()
                .map(|&i| {
                    let [theta, v0, v1] = refs[i];
                    let value = [v0, v1][theta as usize ^ flip];
                    OmegaEntry { index: i, theta, value }
                })
                .collect(),
        )
    };
    let ots1nc = Ots1NC(ch.unopened.iter().map(|&i| OffsetBit { index: i, d: refs[i][0] }).collect());
    Ok(SimEq {
        public: TwoRoundSetup { params: params.clone(), ck, hk: Some(hk), domain },
        pairs,
        ots1c: Ots1C { cms, t: ch.tuple, openings },
        ots1nc,
        omega0: omega(0),
        omega1: omega(1),
        refs,
    })
}
