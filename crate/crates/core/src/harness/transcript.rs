//! Per-run transcripts and their JSON encoding.
//!
//! Field order is fixed by declaration order. Byte strings are lowercase hex
//! on write and accepted in either case on read; unknown fields are errors.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::config::{HybridName, Protocol};
use super::seed::Seed;
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::oneshot::{AdversaryStrategy, SenderMessage, SetupMode};
use crate::relations::ProtocolParams;
use crate::tworound::{Ots1C, Ots1NC, Ots2};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptVerdict {
    pub accept: bool,
    pub failed_step: Option<u8>,
    pub b: Option<u8>,
    pub m_b: Option<BitString>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneShotStats {
    pub trial: u64,
    pub hybrid: HybridName,
    pub step2_checked: usize,
    pub step2_passed: usize,
    /// Whether `m_b` equals the sender's input `m_b`; absent on abort.
    pub correct: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneShotTranscript {
    pub protocol: Protocol,
    pub params: ProtocolParams,
    pub seed: Seed,
    pub mode: SetupMode,
    pub adversary: AdversaryStrategy,
    pub sender_message: SenderMessage,
    pub verdict: TranscriptVerdict,
    pub stats: OneShotStats,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoRoundStats {
    pub trial: u64,
    /// `|T̄ ∖ U|`, the length of the hashed strings.
    pub hashed_len: usize,
    pub correct: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoRoundTranscript {
    pub protocol: Protocol,
    pub params: ProtocolParams,
    pub seed: Seed,
    pub mode: SetupMode,
    pub adversary: AdversaryStrategy,
    #[serde(rename = "ots1C")]
    pub ots1c: Ots1C,
    #[serde(rename = "ots1NC")]
    pub ots1nc: Ots1NC,
    pub ots2: Option<Ots2>,
    pub verdict: TranscriptVerdict,
    pub stats: TwoRoundStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Transcript {
    OneShot(Box<OneShotTranscript>),
    TwoRound(Box<TwoRoundTranscript>),
}

impl Transcript {
    pub fn verdict(&self) -> &TranscriptVerdict {
        match self {
            Transcript::OneShot(t) => &t.verdict,
            Transcript::TwoRound(t) => &t.verdict,
        }
    }
}

pub fn serialize_transcript(t: &Transcript) -> Result<Vec<u8>> {
    serde_json::to_vec_pretty(t).map_err(|e| Error::Parse(e.to_string()))
}

fn parse_with_path<T: DeserializeOwned>(bytes: &[u8]) -> Result<T> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let value = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| Error::Schema { path: e.path().to_string(), message: e.inner().to_string() })?;
    de.end().map_err(|e| Error::Schema { path: ".".into(), message: e.to_string() })?;
    Ok(value)
}

/// Parses a transcript, dispatching on its `protocol` field.
pub fn deserialize_transcript(bytes: &[u8]) -> Result<Transcript> {
    #[derive(Deserialize)]
    struct Head {
        protocol: Protocol,
    }
    let head: serde_json::Value = parse_with_path(bytes)?;
    let protocol = serde_json::from_value::<Head>(head)
        .map_err(|e| Error::Schema { path: "protocol".into(), message: e.to_string() })?
        .protocol;
    match protocol {
        Protocol::Oneshot => Ok(Transcript::OneShot(Box::new(parse_with_path(bytes)?))),
        Protocol::Tworound => Ok(Transcript::TwoRound(Box::new(parse_with_path(bytes)?))),
        Protocol::Skeleton => {
            Err(Error::Schema { path: "protocol".into(), message: "skeleton runs have no transcript".into() })
        }
    }
}
