//! Idealized non-interactive proof for the one-shot sender statement.
//!
//! A proof is the statement digest plus a `2λ`-bit tag keyed by the CRS.
//! Honest proving runs the full witness check; the simulator skips it.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::commit::{open_verify, CommitKey, Commitment};
use super::prf::{prf, sha256};
use super::prg::prg_expand;
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::hexser;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Crs(#[serde(with = "hexser")] pub Vec<u8>);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NizkProof {
    #[serde(with = "hexser")]
    pub digest: Vec<u8>,
    #[serde(with = "hexser")]
    pub tag: Vec<u8>,
}

/// Public part: the key, all `ℓ` commitments, the unopened index set and
/// the pair of mask commitments for each unopened index.
#[derive(Debug, Clone)]
pub struct Statement<'a> {
    pub ck: &'a CommitKey,
    pub cms: &'a [Commitment],
    pub t_bar: &'a [usize],
    pub hat_cms: &'a [[Commitment; 2]],
}

/// Per-index opening of `cm_i` to `(v_i, x_i, h_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CmOpening {
    pub v: BitString,
    pub h: u8,
    pub r: BitString,
}

/// Per unopened index: `t_i` and the coins of both mask commitments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskOpening {
    pub t: BitString,
    pub r0: BitString,
    pub r1: BitString,
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub seed: BitString,
    pub delta: BitString,
    pub cm_openings: Vec<CmOpening>,
    pub mask_openings: Vec<MaskOpening>,
}

impl Crs {
    /// CRS of 32·λ bits.
    pub fn random<R: Rng + ?Sized>(lambda: usize, rng: &mut R) -> Self {
        let mut b = vec![0u8; 4 * lambda];
        rng.fill(b.as_mut_slice());
        Crs(b)
    }
}

impl Statement<'_> {
    pub fn digest(&self) -> [u8; 32] {
        let mut buf = self.ck.encode();
        buf.extend((self.cms.len() as u32).to_be_bytes());
        for cm in self.cms {
            buf.extend(cm.encode());
        }
        buf.extend((self.t_bar.len() as u32).to_be_bytes());
        for (i, pair) in self.t_bar.iter().zip(self.hat_cms) {
            buf.extend((*i as u32).to_be_bytes());
            buf.extend(pair[0].encode());
            buf.extend(pair[1].encode());
        }
        sha256(&buf)
    }
}

/// The committed tuple `v ‖ x ‖ h`.
pub fn cm_message(v: &BitString, x: &BitString, h: u8) -> BitString {
    v.concat(x).concat(&BitString::from_bits(&[h]))
}

/// The relation checked by honest proving:
/// (a) for each unopened index the mask commitments open to `t_i` and `t_i ⊕ Δ`;
/// (b) each `cm_i` opens to a tuple whose `x_i` is the `i`-th block of `PRG(s)`.
pub fn check_witness(stmt: &Statement<'_>, w: &Witness) -> bool {
    let lambda = stmt.ck.lambda();
    let ell = stmt.cms.len();
    if w.cm_openings.len() != ell
        || w.mask_openings.len() != stmt.t_bar.len()
        || stmt.hat_cms.len() != stmt.t_bar.len()
        || w.delta.len() != lambda
    {
        return false;
    }
    for (pair, mo) in stmt.hat_cms.iter().zip(&w.mask_openings) {
        let Ok(shifted) = mo.t.xor(&w.delta) else { return false };
        if !open_verify(stmt.ck, &pair[0], &mo.t, &mo.r0) || !open_verify(stmt.ck, &pair[1], &shifted, &mo.r1) {
            return false;
        }
    }
    let xs = prg_expand(&w.seed, 2 * lambda * ell);
    stmt.cms.iter().zip(&w.cm_openings).enumerate().all(|(i, (cm, op))| {
        let x = xs.slice(2 * lambda * i..2 * lambda * (i + 1));
        open_verify(stmt.ck, cm, &cm_message(&op.v, &x, op.h), &op.r)
    })
}

fn tag(crs: &Crs, digest: &[u8], lambda: usize) -> Vec<u8> {
    let nbits = 2 * lambda;
    let mut t = prf(&crs.0, "nizk-tag", digest)[..nbits.div_ceil(8).min(32)].to_vec();
    if nbits % 8 != 0 {
        let last = t.len() - 1;
        t[last] &= 0xffu8 << (8 - nbits % 8);
    }
    t
}

pub fn nizk_prove(crs: &Crs, stmt: &Statement<'_>, w: &Witness) -> Result<NizkProof> {
    if !check_witness(stmt, w) {
        return Err(Error::BadWitness);
    }
    Ok(sim_prove(crs, stmt))
}

pub fn nizk_verify(crs: &Crs, stmt: &Statement<'_>, proof: &NizkProof) -> bool {
    let d = stmt.digest();
    proof.digest == d && proof.tag == tag(crs, &d, stmt.ck.lambda())
}

/// Simulator: fresh CRS and an accepting proof, no witness.
pub fn nizk_sim<R: Rng + ?Sized>(stmt: &Statement<'_>, rng: &mut R) -> (Crs, NizkProof) {
    let crs = Crs::random(stmt.ck.lambda(), rng);
    let proof = sim_prove(&crs, stmt);
    (crs, proof)
}

/// Accepting proof under a given CRS without a witness check. Models the
/// simulation trapdoor; also used to script a forged proof.
pub fn sim_prove(crs: &Crs, stmt: &Statement<'_>) -> NizkProof {
    let d = stmt.digest();
    NizkProof { digest: d.to_vec(), tag: tag(crs, &d, stmt.ck.lambda()) }
}
