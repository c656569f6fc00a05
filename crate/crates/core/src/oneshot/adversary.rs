use std::fmt;
use std::str::FromStr;

use eprot_quantum::QState;
use rand::seq::index::sample;
use rand::Rng;

use super::sender::{build_message, Script, SenderSecrets};
use super::setup::PublicSetup;
use super::SenderMessage;
use crate::bits::BitString;
use crate::error::{Error, Result};

/// Scripted sender strategies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdversaryStrategy {
    Honest,
    /// Measures every `S_ctl` in the standard basis and commits a uniform `h`.
    NoDelete,
    /// Commits a fresh random `(v, x, h)` at a uniformly chosen fraction of
    /// indices and uses those values throughout; the proof is forged.
    WrongCommit(f64),
    /// Independent offset per unopened index; the proof is forged.
    InconsistentOffsets,
}

impl AdversaryStrategy {
    fn script<R: Rng + ?Sized>(&self, ell: usize, rng: &mut R) -> Result<Script> {
        Ok(match *self {
            AdversaryStrategy::Honest => Script::default(),
            AdversaryStrategy::NoDelete => Script { ctl_standard: true, ..Script::default() },
            AdversaryStrategy::WrongCommit(f) => {
                if !(0.0..=1.0).contains(&f) {
                    return Err(Error::Config(format!("wrong-commit fraction {f} outside [0, 1]")));
                }
                let k = (f * ell as f64).round() as usize;
                let mut fake = sample(rng, ell, k).into_vec();
                fake.sort_unstable();
                Script { fake, forge_proof: true, ..Script::default() }
            }
            AdversaryStrategy::InconsistentOffsets => {
                Script { independent_offsets: true, forge_proof: true, ..Script::default() }
            }
        })
    }
}

impl fmt::Display for AdversaryStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdversaryStrategy::Honest => write!(f, "honest"),
            AdversaryStrategy::NoDelete => write!(f, "no-delete"),
            AdversaryStrategy::WrongCommit(x) => write!(f, "wrong-commit:{x}"),
            AdversaryStrategy::InconsistentOffsets => write!(f, "inconsistent-offsets"),
        }
    }
}

impl FromStr for AdversaryStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown adversary {s:?}"));
        match s {
            "honest" => Ok(AdversaryStrategy::Honest),
            "no-delete" => Ok(AdversaryStrategy::NoDelete),
            "inconsistent-offsets" => Ok(AdversaryStrategy::InconsistentOffsets),
            _ => {
                let f = s.strip_prefix("wrong-commit:").ok_or_else(bad)?;
                let f: f64 = f.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&f) {
                    return Err(bad());
                }
                Ok(AdversaryStrategy::WrongCommit(f))
            }
        }
    }
}

impl serde::Serialize for AdversaryStrategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for AdversaryStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Knobs shared by every strategy.
#[derive(Debug, Clone, Default)]
pub struct SendOptions {
    /// Use this PRG seed instead of a fresh one.
    pub seed: Option<BitString>,
}

pub fn adversary_send<R: Rng + ?Sized>(
    strategy: AdversaryStrategy,
    public: &PublicSetup,
    collections: &mut [QState],
    m0: &BitString,
    m1: &BitString,
    opts: &SendOptions,
    rng: &mut R,
) -> Result<(SenderMessage, SenderSecrets)> {
    let mut script = strategy.script(public.ell(), rng)?;
    script.seed = opts.seed.clone();
    build_message(public, collections, m0, m1, &script, rng)
}
