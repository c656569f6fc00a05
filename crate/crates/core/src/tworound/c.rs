//! Committed parts of the first two rounds.

use rand::Rng;

use super::{Omega, OmegaEntry, Ot2cVerdict, Ots1C, ReceiverState, SenderState, TripleOpening, TwoRoundSetup};
use crate::bits::BitString;
use crate::crypto::{commit, open_verify};
use crate::error::{Error, Result};
use crate::oneshot::Challenge;

pub(crate) fn triple(theta: u8, v0: u8, v1: u8) -> BitString {
    BitString::from_bits(&[theta, v0, v1])
}

/// Commits to every `(θ_i, v_i0, v_i1)`, hashes the commitments to `T`,
/// opens `T` and keeps `ω` for the unopened indices. Also returns the coins.
pub fn ot1_c<R: Rng + ?Sized>(
    public: &TwoRoundSetup,
    sigma: &ReceiverState,
    rng: &mut R,
) -> Result<(Ots1C, Omega, Vec<BitString>)> {
    let ell = public.params.ell();
    if sigma.theta.len() != ell || sigma.v.len() != ell {
        return Err(Error::Length { expected: ell, got: sigma.theta.len() });
    }
    let coins: Vec<BitString> = (0..ell).map(|_| BitString::random(public.params.lambda, rng)).collect();
    let cms: Vec<_> = (0..ell)
        .map(|i| commit(&public.ck, &triple(sigma.theta[i], sigma.v[i][0], sigma.v[i][1]), &coins[i]))
        .collect();
    let ch = Challenge::compute(&public.domain, public.hk()?, &cms)?;
    let openings = ch
        .opened
        .iter()
        .map(|&i| TripleOpening { index: i, theta: sigma.theta[i], v0: sigma.v[i][0], v1: sigma.v[i][1], r: coins[i].clone() })
        .collect();
    let omega = Omega(
        ch.unopened
            .iter()
            .map(|&i| OmegaEntry { index: i, theta: sigma.theta[i], value: sigma.v[i][sigma.theta[i] as usize] })
            .collect(),
    );
    Ok((Ots1C { cms, t: ch.tuple, openings }, omega, coins))
}

/// The sender's check of the committed part.
pub fn ot2_c(public: &TwoRoundSetup, sigma: &SenderState, ots1c: &Ots1C) -> Result<Ot2cVerdict> {
    let ell = public.params.ell();
    if sigma.in_u.len() != ell || ots1c.cms.len() != ell {
        return Ok(Ot2cVerdict::Reject { condition: 1 });
    }
    let ch = Challenge::compute(&public.domain, public.hk()?, &ots1c.cms)?;
    if ch.tuple != ots1c.t {
        return Ok(Ot2cVerdict::Reject { condition: 1 });
    }
    let opened_ok = ots1c.openings.iter().map(|o| o.index).eq(ch.opened.iter().copied())
        && ots1c.openings.iter().all(|o| {
            o.theta <= 1 && o.v0 <= 1 && o.v1 <= 1 && open_verify(&public.ck, &ots1c.cms[o.index], &triple(o.theta, o.v0, o.v1), &o.r)
        });
    if !opened_ok {
        return Ok(Ot2cVerdict::Reject { condition: 2 });
    }
    let consistent = ots1c
        .openings
        .iter()
        .filter(|o| sigma.in_u[o.index] && sigma.theta[o.index] == Some(o.theta))
        .all(|o| sigma.v[o.index] == [o.v0, o.v1]);
    Ok(if consistent { Ot2cVerdict::Accept } else { Ot2cVerdict::Reject { condition: 3 } })
}
