//! Run configuration shared by the CLI and the trial runner.

use std::fmt;
use std::str::FromStr;

use eprot_quantum::BackendKind;
use serde::{Deserialize, Serialize};

use super::seed::Seed;
use crate::error::{Error, Result};
use crate::oneshot::{AdversaryStrategy, SetupMode};
use crate::relations::ProtocolParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Oneshot,
    Tworound,
    Skeleton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Statevector,
    Stabilizer,
    #[default]
    Auto,
}

impl FromStr for BackendChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "statevector" => Ok(BackendChoice::Statevector),
            "stabilizer" => Ok(BackendChoice::Stabilizer),
            "auto" => Ok(BackendChoice::Auto),
            _ => Err(Error::Config(format!("unknown backend {s:?}"))),
        }
    }
}

/// Receiver variant from the hybrid argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HybridName {
    #[default]
    Sequential,
    Coherent,
    PreGamma,
    PrePostGamma,
}

impl HybridName {
    pub fn needs_trapdoor(self) -> bool {
        matches!(self, HybridName::PreGamma | HybridName::PrePostGamma)
    }

    pub fn name(self) -> &'static str {
        match self {
            HybridName::Sequential => "sequential",
            HybridName::Coherent => "coherent",
            HybridName::PreGamma => "pre-gamma",
            HybridName::PrePostGamma => "pre-post-gamma",
        }
    }
}

impl fmt::Display for HybridName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HybridName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [HybridName::Sequential, HybridName::Coherent, HybridName::PreGamma, HybridName::PrePostGamma]
            .into_iter()
            .find(|h| h.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown hybrid {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub protocol: Protocol,
    pub params: ProtocolParams,
    pub adversary: AdversaryStrategy,
    pub hybrid: HybridName,
    pub trials: usize,
    pub seed: Seed,
    pub backend: BackendChoice,
}

impl RunConfig {
    pub fn new(protocol: Protocol, params: ProtocolParams, trials: usize, seed: Seed) -> Self {
        RunConfig {
            protocol,
            params,
            adversary: AdversaryStrategy::Honest,
            hybrid: HybridName::Sequential,
            trials,
            seed,
            backend: BackendChoice::Auto,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.protocol != Protocol::Oneshot {
            if self.adversary != AdversaryStrategy::Honest {
                return Err(Error::Config("scripted adversaries exist only for the one-shot protocol".into()));
            }
            if self.hybrid != HybridName::Sequential {
                return Err(Error::Config("hybrid receivers exist only for the one-shot protocol".into()));
            }
        }
        Ok(())
    }

    /// Every scripted party is Clifford-only, so `auto` picks the stabilizer backend.
    pub fn backend_kind(&self) -> BackendKind {
        match self.backend {
            BackendChoice::Statevector => BackendKind::Statevector,
            BackendChoice::Stabilizer | BackendChoice::Auto => BackendKind::Stabilizer,
        }
    }

    pub fn setup_mode(&self) -> SetupMode {
        if self.hybrid.needs_trapdoor() {
            SetupMode::ExtractMode
        } else {
            SetupMode::HonestCrs
        }
    }
}
