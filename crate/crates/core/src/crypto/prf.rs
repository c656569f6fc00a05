//! Keyed pseudorandom functions over HMAC-SHA256.

use hmac::{Hmac, KeyInit, Mac};
use num_bigint::BigUint;
use sha2::{Digest, Sha256};

use crate::bits::BitString;

type HmacSha256 = Hmac<Sha256>;

/// One 32-byte block `HMAC(key, label ‖ data)`.
pub fn prf(key: &[u8], label: &str, data: &[u8]) -> [u8; 32] {
    let mut mac = HmacSha256::new_from_slice(key).expect("HMAC accepts keys of any length");
    mac.update(&(label.len() as u32).to_be_bytes());
    mac.update(label.as_bytes());
    mac.update(data);
    mac.finalize().into_bytes().into()
}

/// Counter-mode output stream of `nbytes` bytes. Prefix-consistent in `nbytes`.
pub fn prf_bytes(key: &[u8], label: &str, data: &[u8], nbytes: usize) -> Vec<u8> {
    let digest = sha256(data);
    let mut out = Vec::with_capacity(nbytes + 32);
    let mut ctr = 0u64;
    while out.len() < nbytes {
        let mut block = digest.to_vec();
        block.extend_from_slice(&ctr.to_be_bytes());
        out.extend_from_slice(&prf(key, label, &block));
        ctr += 1;
    }
    out.truncate(nbytes);
    out
}

pub fn prf_bits(key: &[u8], label: &str, data: &[u8], nbits: usize) -> BitString {
    BitString::from_bytes(&prf_bytes(key, label, data, nbits.div_ceil(8)), nbits)
}

/// Stream of `nbits` bits read as a big-endian integer.
pub fn prf_int(key: &[u8], label: &str, data: &[u8], nbits: usize) -> BigUint {
    prf_bits(key, label, data, nbits).to_biguint()
}

pub fn sha256(data: &[u8]) -> [u8; 32] {
    Sha256::digest(data).into()
}

/// Uniform integer in `[0, bound)` by rejection sampling.
pub fn random_below<R: rand::Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(*bound > BigUint::from(0u8), "empty range");
    let bits = bound.bits() as usize;
    let mut buf = vec![0u8; bits.div_ceil(8)];
    loop {
        rng.fill(buf.as_mut_slice());
        let v = BitString::from_bytes(&buf, bits).to_biguint();
        if v < *bound {
            return v;
        }
    }
}
