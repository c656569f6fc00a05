//! Deterministic seeding, Monte-Carlo runs, statistics and transcripts.

pub mod config;
pub mod run;
pub mod seed;
pub mod stats;
pub mod transcript;

pub use config::{BackendChoice, HybridName, Protocol, RunConfig};
pub use run::{oneshot_transcript, run_reduction, run_trials, ReductionReport, RunOutput, StatsReport, WORKERS_ENV};
pub use seed::{role, Seed};
pub use transcript::{deserialize_transcript, serialize_transcript, OneShotTranscript, Transcript, TwoRoundTranscript};
