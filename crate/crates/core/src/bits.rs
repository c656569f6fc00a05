//! Bit strings with one byte per bit.
//!
//! Serialized as a string of `0`/`1` characters; packed forms are
//! big-endian with the first bit in the top bit of the first byte.

use std::fmt;
use std::ops::Range;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn zeros(n: usize) -> Self {
        BitString(vec![0; n])
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        BitString((0..n).map(|_| rng.random::<bool>() as u8).collect())
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        BitString(bits.iter().map(|b| b & 1).collect())
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_u64(value: u64, width: usize) -> Self {
        BitString((0..width).rev().map(|i| if i < 64 { ((value >> i) & 1) as u8 } else { 0 }).collect())
    }

    /// The first `n` bits of `bytes`, each byte read from its top bit.
    pub fn from_bytes(bytes: &[u8], n: usize) -> Self {
        BitString((0..n).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn bit(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn parity(&self) -> u8 {
        self.0.iter().fold(0, |a, b| a ^ b)
    }

    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len() != other.len() {
            return Err(Error::Length { expected: self.len(), got: other.len() });
        }
        Ok(BitString(self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect()))
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BitString(v)
    }

    pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a BitString>) -> BitString {
        BitString(parts.into_iter().flat_map(|p| p.0.iter().copied()).collect())
    }

    pub fn slice(&self, r: Range<usize>) -> BitString {
        BitString(self.0[r].to_vec())
    }

    /// Splits into consecutive pieces of the given lengths.
    pub fn split(&self, lens: &[usize]) -> Result<Vec<BitString>> {
        let total: usize = lens.iter().sum();
        if total != self.len() {
            return Err(Error::Length { expected: total, got: self.len() });
        }
        let mut out = Vec::with_capacity(lens.len());
        let mut at = 0;
        for &l in lens {
            out.push(self.slice(at..at + l));
            at += l;
        }
        Ok(out)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len().div_ceil(8)];
        for (i, &b) in self.0.iter().enumerate() {
            out[i / 8] |= b << (7 - i % 8);
        }
        out
    }

    /// Length-prefixed packed encoding, unambiguous across lengths.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = (self.len() as u32).to_be_bytes().to_vec();
        out.extend(self.to_bytes());
        out
    }

    pub fn to_biguint(&self) -> BigUint {
        self.0.iter().fold(BigUint::from(0u8), |acc, &b| (acc << 1u8) + BigUint::from(b))
    }

    pub fn to_u64(&self) -> u64 {
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn xor_all<'a>(len: usize, parts: impl IntoIterator<Item = &'a BitString>) -> Result<BitString> {
        parts.into_iter().try_fold(BitString::zeros(len), |acc, p| acc.xor(p))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
