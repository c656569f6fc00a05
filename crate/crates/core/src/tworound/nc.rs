//! Non-committed parts: bit algebra and the universal hash only.

use rand::Rng;

use super::{Omega, OffsetBit, Ots1NC, Ots2, SenderState};
use crate::bits::BitString;
use crate::crypto::uhash::{uhash, UHashKey};
use crate::error::{Error, Result};

/// Bits of the universal hash seed.
pub const UHASH_SEED_BITS: usize = 128;

/// `d_i = b ⊕ θ_i` for every unopened index.
pub fn ot1_nc(b: u8, omega: &Omega) -> Ots1NC {
    Ots1NC(omega.0.iter().map(|e| OffsetBit { index: e.index, d: b ^ e.theta }).collect())
}

/// `(V0, V1)` over the unopened indices outside `U`: `V_k` takes `v_{i, d_i ⊕ k}`.
pub fn selection_strings(sigma: &SenderState, ots1nc: &Ots1NC) -> Result<(BitString, BitString)> {
    let mut v0 = Vec::new();
    let mut v1 = Vec::new();
    for OffsetBit { index, d } in &ots1nc.0 {
        let (i, d) = (*index, (*d & 1) as usize);
        if i >= sigma.in_u.len() {
            return Err(Error::Length { expected: sigma.in_u.len(), got: i });
        }
        if !sigma.in_u[i] {
            v0.push(sigma.v[i][d]);
            v1.push(sigma.v[i][d ^ 1]);
        }
    }
    Ok((BitString::from_bits(&v0), BitString::from_bits(&v1)))
}

/// Masks `m_k` with `F(s, V_k)` under a fresh hash seed `s`.
pub fn ot2_nc<R: Rng + ?Sized>(
    sigma: &SenderState,
    ots1nc: &Ots1NC,
    m0: &BitString,
    m1: &BitString,
    rng: &mut R,
) -> Result<Ots2> {
    if m0.len() != m1.len() {
        return Err(Error::Length { expected: m0.len(), got: m1.len() });
    }
    let (v0, v1) = selection_strings(sigma, ots1nc)?;
    let s = UHashKey { seed: BitString::random(UHASH_SEED_BITS, rng) };
    let n = m0.len();
    Ok(Ots2 { m0_tilde: m0.xor(&uhash(&s, &v0, n))?, m1_tilde: m1.xor(&uhash(&s, &v1, n))?, u: sigma.u(), s })
}

/// `m_b = m̃_b ⊕ F(s, V)` with `V` the kept values of `ω` outside `U`.
pub fn ot3(ots2: &Ots2, b: u8, omega: &Omega) -> Result<BitString> {
    let v: Vec<u8> = omega.0.iter().filter(|e| ots2.u.binary_search(&e.index).is_err()).map(|e| e.value).collect();
    let m = if b & 1 == 0 { &ots2.m0_tilde } else { &ots2.m1_tilde };
    m.xor(&uhash(&ots2.s, &BitString::from_bits(&v), m.len()))
}
