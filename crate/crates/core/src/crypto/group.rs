//! Order-q subgroup of Z_p^* for a safe prime p = 2q + 1, generated by 4.

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use super::prf::random_below;
use crate::error::{Error, Result};

const P64: &str = "802f15d19c1aed63";
const P128: &str = "eb4cb6b97707cfa230e8e3dc2c452bf7";
const P256: &str = "f48c66489ed711e5f008c1b70ce954f98498c1b7148c346afbf4421963a28203";
const P512: &str = "b4b407de3cb44debd24a95158ec057cee4d558a5bfb6dfe5f37474b391676d14\
                    979dc5be52509b3080cd8a43be3ecf364842a6c30d7ecb5a5aca1fb345cb65c7";

pub const DEFAULT_GROUP_BITS: usize = 512;
pub const SUPPORTED_GROUP_BITS: [usize; 4] = [64, 128, 256, 512];

#[derive(Debug, PartialEq, Eq)]
pub struct Group {
    pub bits: usize,
    pub p: BigUint,
    pub q: BigUint,
    pub g: BigUint,
}

impl Group {
    /// Shared instance for one of [`SUPPORTED_GROUP_BITS`].
    pub fn standard(bits: usize) -> Result<Arc<Group>> {
        static CACHE: [OnceLock<Arc<Group>>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let (slot, hex) = match bits {
            64 => (0, P64),
            128 => (1, P128),
            256 => (2, P256),
            512 => (3, P512),
            _ => return Err(Error::Params(format!("unsupported group size {bits}; use one of {SUPPORTED_GROUP_BITS:?}"))),
        };
        Ok(CACHE[slot]
            .get_or_init(|| {
                let clean: String = hex.chars().filter(|c| c.is_ascii_hexdigit()).collect();
                let p = BigUint::parse_bytes(clean.as_bytes(), 16).expect("valid constant");
                let q = (&p - 1u8) >> 1u8;
                Arc::new(Group { bits, p, q, g: BigUint::from(4u8) })
            })
            .clone())
    }

    pub fn element_len(&self) -> usize {
        self.bits.div_ceil(8)
    }

    /// Fixed-width big-endian encoding.
    pub fn encode(&self, e: &BigUint) -> Vec<u8> {
        let raw = e.to_bytes_be();
        let mut out = vec![0u8; self.element_len() - raw.len()];
        out.extend(raw);
        out
    }

    pub fn decode(&self, bytes: &[u8]) -> Result<BigUint> {
        if bytes.len() != self.element_len() {
            return Err(Error::Length { expected: self.element_len(), got: bytes.len() });
        }
        let e = BigUint::from_bytes_be(bytes);
        if !self.contains(&e) {
            return Err(Error::Parse("value is not a subgroup element".into()));
        }
        Ok(e)
    }

    pub fn contains(&self, e: &BigUint) -> bool {
        *e > BigUint::from(0u8) && *e < self.p && e.modpow(&self.q, &self.p).is_one()
    }

    pub fn pow(&self, base: &BigUint, exp: &BigUint) -> BigUint {
        base.modpow(exp, &self.p)
    }

    pub fn gen_pow(&self, exp: &BigUint) -> BigUint {
        self.pow(&self.g, exp)
    }

    /// Uniform exponent in `[1, q)`.
    pub fn random_exponent<R: Rng + ?Sized>(&self, rng: &mut R) -> BigUint {
        random_below(&(&self.q - 1u8), rng) + 1u8
    }

    /// Uniform subgroup element drawn without learning its discrete log.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> BigUint {
        loop {
            let x = random_below(&(&self.p - 3u8), rng) + 2u8;
            let e = (&x * &x) % &self.p;
            if !e.is_one() {
                return e;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_safe_primes_with_generator() {
        for bits in SUPPORTED_GROUP_BITS {
            let g = Group::standard(bits).unwrap();
            assert_eq!(g.p.bits() as usize, bits);
            assert_eq!(&g.q * 2u8 + 1u8, g.p);
            assert!(g.contains(&g.g));
            assert!(g.gen_pow(&g.q).is_one());
            for base in [2u8, 3, 5, 7] {
                let b = BigUint::from(base);
                assert!(b.modpow(&(&g.p - 1u8), &g.p).is_one());
                assert!(b.modpow(&(&g.q - 1u8), &g.q).is_one());
            }
        }
        assert!(Group::standard(100).is_err());
    }

    #[test]
    fn encoding_round_trips() {
        let g = Group::standard(64).unwrap();
        let e = g.gen_pow(&BigUint::from(3u8));
        assert_eq!(g.decode(&g.encode(&e)).unwrap(), e);
        assert!(g.decode(&[0u8; 8]).is_err());
    }
}
