//! Hash onto `t`-tuples of `c/2`-subsets of `[c]`, with key sampling that
//! programs the output on a chosen input.
//!
//! `H(hk, x) = unrank((PRF(k, x) + δ) mod |Y|^t)` with `hk = (k, δ)`.

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::combin::ProductDomain;
use super::prf::{prf_int, random_below};
use crate::error::Result;
use crate::hexser;

/// Extra PRF bits beyond `log |Y|^t`, making the reduction bias negligible.
const SLACK_BITS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CiHashKey {
    #[serde(with = "hexser")]
    pub prf_key: Vec<u8>,
    #[serde(with = "decimal")]
    pub delta: BigUint,
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| serde::de::Error::custom("invalid decimal integer"))
    }
}

/// Key length in bytes for security parameter `lambda_ci` (32·λ bits).
pub fn key_len(lambda_ci: usize) -> usize {
    4 * lambda_ci
}

fn prf_value(domain: &ProductDomain, key: &[u8], x: &[u8]) -> BigUint {
    prf_int(key, "ci-hash", x, domain.size.bits() as usize + SLACK_BITS) % &domain.size
}

pub fn ci_gen<R: Rng + ?Sized>(domain: &ProductDomain, lambda_ci: usize, rng: &mut R) -> CiHashKey {
    let mut prf_key = vec![0u8; key_len(lambda_ci)];
    rng.fill(prf_key.as_mut_slice());
    let delta = random_below(&domain.size, rng);
    CiHashKey { prf_key, delta }
}

pub fn ci_hash(domain: &ProductDomain, hk: &CiHashKey, x: &[u8]) -> Result<Vec<Vec<usize>>> {
    let v = (prf_value(domain, &hk.prf_key, x) + &hk.delta) % &domain.size;
    domain.unrank(&v)
}

/// Samples a key with `H(hk, x) = y`.
pub fn ci_samp<R: Rng + ?Sized>(
    domain: &ProductDomain,
    lambda_ci: usize,
    x: &[u8],
    y: &[Vec<usize>],
    rng: &mut R,
) -> Result<CiHashKey> {
    let mut prf_key = vec![0u8; key_len(lambda_ci)];
    rng.fill(prf_key.as_mut_slice());
    let delta = programmed_delta(domain, &prf_key, x, y)?;
    Ok(CiHashKey { prf_key, delta })
}

/// `δ = rank(y) - PRF(k, x) mod |Y|^t`.
pub fn programmed_delta(domain: &ProductDomain, key: &[u8], x: &[u8], y: &[Vec<usize>]) -> Result<BigUint> {
    let target = domain.rank(y)?;
    let f = prf_value(domain, key, x);
    Ok((target + &domain.size - f) % &domain.size)
}

/// Offset arithmetic on its own, for a given PRF value.
pub fn delta_for(domain: &ProductDomain, prf: &BigUint, y: &[Vec<usize>]) -> Result<BigUint> {
    let target = domain.rank(y)?;
    Ok((target + &domain.size - (prf % &domain.size)) % &domain.size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn offset_example() {
        let d = ProductDomain::new(4, 1).unwrap();
        assert_eq!(delta_for(&d, &BigUint::from(3u8), &[vec![0, 1]]).unwrap(), BigUint::from(3u8));
    }

    #[test]
    fn sampled_key_hits_target() {
        let d = ProductDomain::new(8, 3).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let y = vec![vec![0, 2, 4, 6], vec![1, 2, 3, 4], vec![4, 5, 6, 7]];
        let hk = ci_samp(&d, 4, b"input", &y, &mut rng).unwrap();
        assert_eq!(ci_hash(&d, &hk, b"input").unwrap(), y);
        assert_eq!(hk.prf_key.len(), 16);
    }
}
