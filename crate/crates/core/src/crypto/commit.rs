//! Hashed ElGamal commitments with an extraction trapdoor.
//!
//! `Com(ck, m; r)`: `ρ = KDF(r)`, `u = g^ρ`, pad `= KDF(ck^ρ)`, then the
//! plaintext and a keyed redundancy tag of `2λ` bits are masked by the pad.
//! Whoever holds `a` with `ck = g^a` recomputes the pad as `u^a`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::group::Group;
use super::prf::{prf_bytes, prf_int};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::hexser;

/// Coin strings up to this length get their exponentiations memoized.
const MEMO_COIN_BITS: usize = 16;

type Memo<V> = Arc<Mutex<HashMap<Vec<u8>, V>>>;

#[derive(Debug, Clone)]
pub struct CommitKey {
    group: Arc<Group>,
    h: BigUint,
    lambda: usize,
    memo: Memo<(BigUint, BigUint)>,
}

impl PartialEq for CommitKey {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.h == other.h && self.lambda == other.lambda
    }
}

impl Eq for CommitKey {}

#[derive(Debug, Clone)]
pub struct ExtractKey {
    a: BigUint,
    memo: Memo<BigUint>,
}

impl PartialEq for ExtractKey {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
    }
}

impl Eq for ExtractKey {}

impl ExtractKey {
    /// `u^a`, or `None` when `u` is not a subgroup element.
    fn shared(&self, group: &Group, u_bytes: &[u8]) -> Option<BigUint> {
        if let Some(s) = self.memo.lock().expect("memo lock").get(u_bytes) {
            return Some(s.clone());
        }
        let u = group.decode(u_bytes).ok()?;
        let s = group.pow(&u, &self.a);
        let mut memo = self.memo.lock().expect("memo lock");
        if memo.len() < 1 << MEMO_COIN_BITS {
            memo.insert(u_bytes.to_vec(), s.clone());
        }
        Some(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Commitment {
    #[serde(with = "hexser")]
    pub u: Vec<u8>,
    #[serde(with = "hexser")]
    pub payload: Vec<u8>,
    #[serde(with = "hexser")]
    pub check: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Opening {
    pub message: BitString,
    pub coins: BitString,
}

impl Commitment {
    /// Canonical byte encoding used when hashing commitments.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.u.len() + self.payload.len() + self.check.len() + 12);
        for part in [&self.u, &self.payload, &self.check] {
            out.extend_from_slice(&(part.len() as u32).to_be_bytes());
            out.extend_from_slice(part);
        }
        out
    }
}

/// Canonical encoding of a commitment list, the hash input for `T`.
pub fn encode_list(cms: &[Commitment]) -> Vec<u8> {
    let mut out = (cms.len() as u32).to_be_bytes().to_vec();
    for cm in cms {
        out.extend(cm.encode());
    }
    out
}

/// Extraction-mode key pair.
pub fn ext_gen<R: Rng + ?Sized>(group: Arc<Group>, lambda: usize, rng: &mut R) -> (CommitKey, ExtractKey) {
    let a = group.random_exponent(rng);
    let h = group.gen_pow(&a);
    (CommitKey::new(group, h, lambda), ExtractKey { a, memo: Memo::default() })
}

impl CommitKey {
    /// Uniform key with no known trapdoor.
    pub fn honest<R: Rng + ?Sized>(group: Arc<Group>, lambda: usize, rng: &mut R) -> Self {
        let h = group.random_element(rng);
        CommitKey::new(group, h, lambda)
    }

    /// Uniform key derived from a shared seed. Nobody learns its discrete log.
    pub fn from_seed(group: Arc<Group>, lambda: usize, seed: &[u8]) -> Self {
        let x = prf_int(seed, "commit-key", &[], group.bits + 64) % (&group.p - 3u8) + 2u8;
        let h = (&x * &x) % &group.p;
        CommitKey::new(group, h, lambda)
    }

    pub fn from_parts(group: Arc<Group>, h: BigUint, lambda: usize) -> Result<Self> {
        if !group.contains(&h) {
            return Err(Error::Parse("commitment key is not a subgroup element".into()));
        }
        Ok(CommitKey::new(group, h, lambda))
    }

    fn new(group: Arc<Group>, h: BigUint, lambda: usize) -> Self {
        CommitKey { group, h, lambda, memo: Memo::default() }
    }

    /// `(g^ρ(r), ck^ρ(r))`.
    fn powers(&self, coins: &BitString) -> (BigUint, BigUint) {
        let memoize = coins.len() <= MEMO_COIN_BITS;
        let key = coins.encode();
        if memoize {
            if let Some(v) = self.memo.lock().expect("memo lock").get(&key) {
                return v.clone();
            }
        }
        let rho = self.exponent(coins);
        let v = (self.group.gen_pow(&rho), self.group.pow(&self.h, &rho));
        if memoize {
            self.memo.lock().expect("memo lock").insert(key, v.clone());
        }
        v
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn encode(&self) -> Vec<u8> {
        self.group.encode(&self.h)
    }

    fn redundancy_len(&self) -> usize {
        (2 * self.lambda).div_ceil(8)
    }

    fn exponent(&self, coins: &BitString) -> BigUint {
        let q1 = &self.group.q - 1u8;
        prf_int(b"commit-exponent", "rho", &coins.encode(), self.group.bits + 64) % q1 + 1u8
    }

    fn redundancy(&self, plaintext: &[u8]) -> Vec<u8> {
        let nbits = 2 * self.lambda;
        let mut tag = prf_bytes(&self.encode(), "commit-redundancy", plaintext, self.redundancy_len());
        if nbits % 8 != 0 {
            let last = tag.len() - 1;
            tag[last] &= 0xffu8 << (8 - nbits % 8);
        }
        tag
    }

    fn pad(&self, shared: &BigUint, len: usize) -> Vec<u8> {
        prf_bytes(&self.group.encode(shared), "commit-pad", &[], len)
    }
}

fn plaintext(m: &BitString) -> Vec<u8> {
    let mut out = (m.len() as u16).to_be_bytes().to_vec();
    out.extend(m.to_bytes());
    out
}

fn xor_bytes(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

pub fn commit(ck: &CommitKey, m: &BitString, coins: &BitString) -> Commitment {
    let (u, shared) = ck.powers(coins);
    let pt = plaintext(m);
    let red = ck.redundancy(&pt);
    let pad = ck.pad(&shared, pt.len() + red.len());
    Commitment {
        u: ck.group.encode(&u),
        payload: xor_bytes(&pt, &pad[..pt.len()]),
        check: xor_bytes(&red, &pad[pt.len()..]),
    }
}

pub fn open_verify(ck: &CommitKey, cm: &Commitment, m: &BitString, coins: &BitString) -> bool {
    commit(ck, m, coins) == *cm
}

/// Recovers the committed message, or `None` when the redundancy check fails.
pub fn extract(ck: &CommitKey, ek: &ExtractKey, cm: &Commitment) -> Option<BitString> {
    if cm.payload.len() < 2 || cm.check.len() != ck.redundancy_len() {
        return None;
    }
    let shared = ek.shared(&ck.group, &cm.u)?;
    let pad = ck.pad(&shared, cm.payload.len() + cm.check.len());
    let pt = xor_bytes(&cm.payload, &pad[..cm.payload.len()]);
    if xor_bytes(&cm.check, &pad[cm.payload.len()..]) != ck.redundancy(&pt) {
        return None;
    }
    let nbits = u16::from_be_bytes([pt[0], pt[1]]) as usize;
    if nbits.div_ceil(8) != pt.len() - 2 {
        return None;
    }
    Some(BitString::from_bytes(&pt[2..], nbits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn setup(lambda: usize) -> (CommitKey, ExtractKey, ChaCha20Rng) {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let (ck, ek) = ext_gen(Group::standard(64).unwrap(), lambda, &mut rng);
        (ck, ek, rng)
    }

    #[test]
    fn commit_open_extract() {
        let (ck, ek, mut rng) = setup(4);
        let m: BitString = "1011".parse().unwrap();
        let r = BitString::random(4, &mut rng);
        let cm = commit(&ck, &m, &r);
        assert!(open_verify(&ck, &cm, &m, &r));
        assert!(!open_verify(&ck, &cm, &"1010".parse().unwrap(), &r));
        assert_eq!(extract(&ck, &ek, &cm), Some(m));
        assert_eq!(cm.payload.len() + cm.check.len(), 2 + 1 + 1);
    }

    #[test]
    fn odd_lengths_round_trip() {
        let (ck, ek, mut rng) = setup(3);
        for len in [0, 1, 7, 8, 9, 17] {
            let m = BitString::random(len, &mut rng);
            let cm = commit(&ck, &m, &BitString::random(3, &mut rng));
            assert_eq!(extract(&ck, &ek, &cm), Some(m));
        }
    }

    #[test]
    fn wrong_trapdoor_fails_redundancy() {
        let (ck, _, mut rng) = setup(8);
        let (_, other) = ext_gen(ck.group().clone(), 8, &mut rng);
        let mut failures = 0;
        for _ in 0..100 {
            let m = BitString::random(8, &mut rng);
            let cm = commit(&ck, &m, &BitString::random(8, &mut rng));
            if extract(&ck, &other, &cm).is_none() {
                failures += 1;
            }
        }
        assert_eq!(failures, 100);
    }
}
