//! Seeded Monte-Carlo runner.

use std::collections::BTreeMap;

use eprot_quantum::BackendKind;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{HybridName, Protocol, RunConfig};
use super::seed::{role, Seed};
use super::stats::{chi_square_uniform, rate_check, ChiSquare, RateCheck};
use super::transcript::{OneShotStats, OneShotTranscript, Transcript, TranscriptVerdict, TwoRoundStats, TwoRoundTranscript};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::oneshot::{
    adversary_send, fresh_collection, receiver_receive, setup, skeleton_receiver, skeleton_sender, AdversaryStrategy,
    run_exp2, CollectionLayout, Exp2Outcome, HybridConfig, SendOptions, SetupMode, Verdict,
};
use crate::relations::ProtocolParams;
use crate::tworound::{
    mr_measure, ms_measure, ot1_c, ot1_nc, ot2_c, ot2_nc, ot3, selection_strings, setup_tworound, Ot2cVerdict,
};

/// Environment variable holding the worker count; unset or 0 uses every core.
pub const WORKERS_ENV: &str = "EPROT_WORKERS";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub protocol: Protocol,
    pub adversary: AdversaryStrategy,
    pub hybrid: HybridName,
    pub trials: usize,
    pub accepted: usize,
    pub acceptance_rate: f64,
    pub standard_error: f64,
    /// Aborts keyed by the failed step.
    pub aborts_by_step: BTreeMap<u8, usize>,
    /// Accepted runs whose output equals the sender's input at `b`.
    pub correct: usize,
    /// `b = 1` frequency over accepted runs, when `b` is the receiver's random bit.
    pub b_frequency: Option<RateCheck>,
    pub b_chi_square: Option<ChiSquare>,
    /// Per-opened-index ψ-check pass rate against its analytic value.
    pub step2_per_index: Option<RateCheck>,
    /// Acceptance rate against its analytic value.
    pub acceptance_reference: Option<RateCheck>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: StatsReport,
    pub transcripts: Vec<Transcript>,
}

#[derive(Debug, Clone)]
struct TrialOutcome {
    verdict: TranscriptVerdict,
    correct: bool,
    step2: (usize, usize),
    transcript: Option<Transcript>,
}

fn worker_pool() -> Result<rayon::ThreadPool> {
    let workers = match std::env::var(WORKERS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| Error::Config(format!("{WORKERS_ENV}={v:?} is not a count")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| Error::Config(e.to_string()))
}

/// Runs `config.trials` independent trials; transcripts are kept when `record` is set.
pub fn run_trials(config: &RunConfig, record: bool) -> Result<RunOutput> {
    config.validate()?;
    let pool = worker_pool()?;
    let outcomes: Vec<TrialOutcome> = pool.install(|| {
        (0..config.trials as u64)
            .into_par_iter()
            .map(|i| match config.protocol {
                Protocol::Oneshot => oneshot_trial(config, i, record),
                Protocol::Tworound => tworound_trial(config, i, record),
                Protocol::Skeleton => skeleton_trial(config, i),
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let report = summarize(config, &outcomes)?;
    let transcripts = outcomes.into_iter().filter_map(|o| o.transcript).collect();
    Ok(RunOutput { report, transcripts })
}

fn hybrid_config(name: HybridName, ek: Option<&crate::crypto::ExtractKey>) -> Result<HybridConfig> {
    let ek = || ek.cloned().ok_or_else(|| Error::Config(format!("hybrid {name} needs an extraction-mode setup")));
    Ok(match name {
        HybridName::Sequential => HybridConfig::default(),
        HybridName::Coherent => HybridConfig::coherent(),
        HybridName::PreGamma => HybridConfig::pre_gamma(ek()?),
        HybridName::PrePostGamma => HybridConfig::pre_post_gamma(ek()?),
    })
}

/// One seeded one-shot run; the same `(config, index)` always gives the same transcript.
pub fn oneshot_transcript(config: &RunConfig, index: u64) -> Result<OneShotTranscript> {
    let out = oneshot_trial(config, index, true)?;
    match out.transcript {
        Some(Transcript::OneShot(t)) => Ok(*t),
        _ => unreachable!("one-shot trial records a one-shot transcript"),
    }
}

fn oneshot_trial(config: &RunConfig, index: u64, record: bool) -> Result<TrialOutcome> {
    let seed = config.seed.trial(index);
    let params = &config.params;
    let lambda = params.message_len();
    let mut inputs = seed.stream(role::INPUTS);
    let (m0, m1) = (BitString::random(lambda, &mut inputs), BitString::random(lambda, &mut inputs));
    let mode = config.setup_mode();
    let mut st = setup(params, mode, config.backend_kind(), &mut seed.stream(role::SETUP))?;
    let sender_role = if config.adversary == AdversaryStrategy::Honest { role::SENDER } else { role::ADVERSARY };
    let (msg, _) = adversary_send(
        config.adversary,
        &st.public,
        &mut st.collections,
        &m0,
        &m1,
        &SendOptions::default(),
        &mut seed.stream(sender_role),
    )?;
    let hybrid = hybrid_config(config.hybrid, st.ek.as_ref())?;
    let out = receiver_receive(&st.public, &mut st.collections, &msg, &mut seed.stream(role::RECEIVER), &hybrid)?;
    let (verdict, correct) = match out.verdict {
        Verdict::Accept { b, m_b } => {
            let correct = m_b == if b == 0 { m0 } else { m1 };
            (TranscriptVerdict { accept: true, failed_step: None, b: Some(b), m_b: Some(m_b) }, correct)
        }
        Verdict::Abort { step } => (TranscriptVerdict { accept: false, failed_step: Some(step), b: None, m_b: None }, false),
    };
    let step2 = (out.step2.iter().filter(|&&ok| ok).count(), out.step2.len());
    let transcript = record.then(|| {
        Transcript::OneShot(Box::new(OneShotTranscript {
            protocol: Protocol::Oneshot,
            params: params.clone(),
            seed,
            mode,
            adversary: config.adversary,
            sender_message: msg,
            verdict: verdict.clone(),
            stats: OneShotStats {
                trial: index,
                hybrid: config.hybrid,
                step2_checked: step2.1,
                step2_passed: step2.0,
                correct: verdict.accept.then_some(correct),
            },
        }))
    });
    Ok(TrialOutcome { verdict, correct, step2, transcript })
}

fn tworound_trial(config: &RunConfig, index: u64, record: bool) -> Result<TrialOutcome> {
    let seed = config.seed.trial(index);
    let params = &config.params;
    let lambda = params.message_len();
    let mut inputs = seed.stream(role::INPUTS);
    let b = inputs.random::<bool>() as u8;
    let (m0, m1) = (BitString::random(lambda, &mut inputs), BitString::random(lambda, &mut inputs));
    let mut inst = setup_tworound(params, SetupMode::HonestCrs, config.backend_kind(), &mut seed.stream(role::SETUP))?;
    let mut rr = seed.stream(role::RECEIVER);
    let mut sr = seed.stream(role::SENDER);
    let sigma_r = mr_measure(&mut inst.pairs, &mut rr)?;
    let (ots1c, omega, _) = ot1_c(&inst.public, &sigma_r, &mut rr)?;
    let ots1nc = ot1_nc(b, &omega);
    let sigma_s = ms_measure(&mut inst.pairs, &mut sr)?;
    let hashed_len = selection_strings(&sigma_s, &ots1nc)?.0.len();
    let (verdict, correct, ots2) = match ot2_c(&inst.public, &sigma_s, &ots1c)? {
        Ot2cVerdict::Accept => {
            let ots2 = ot2_nc(&sigma_s, &ots1nc, &m0, &m1, &mut sr)?;
            let m_b = ot3(&ots2, b, &omega)?;
            let correct = m_b == if b == 0 { m0 } else { m1 };
            (TranscriptVerdict { accept: true, failed_step: None, b: Some(b), m_b: Some(m_b) }, correct, Some(ots2))
        }
        Ot2cVerdict::Reject { condition } => {
            (TranscriptVerdict { accept: false, failed_step: Some(condition), b: None, m_b: None }, false, None)
        }
    };
    let transcript = record.then(|| {
        Transcript::TwoRound(Box::new(TwoRoundTranscript {
            protocol: Protocol::Tworound,
            params: params.clone(),
            seed,
            mode: SetupMode::HonestCrs,
            adversary: AdversaryStrategy::Honest,
            ots1c,
            ots1nc,
            ots2,
            verdict: verdict.clone(),
            stats: TwoRoundStats { trial: index, hashed_len, correct: verdict.accept.then_some(correct) },
        }))
    });
    Ok(TrialOutcome { verdict, correct, step2: (0, 0), transcript })
}

/// Skeleton run: accepted when the receiver's string satisfies `v' = v ⊕ b·x`.
fn skeleton_trial(config: &RunConfig, index: u64) -> Result<TrialOutcome> {
    let seed = config.seed.trial(index);
    let layout = CollectionLayout::new(config.params.lambda);
    let x = BitString::random(2 * config.params.lambda, &mut seed.stream(role::INPUTS));
    let mut st = fresh_collection(&layout, config.backend_kind())?;
    let (v, _) = skeleton_sender(&mut st, &layout, &x, &mut seed.stream(role::SENDER))?;
    let (b, v_prime) = skeleton_receiver(&mut st, &layout, &mut seed.stream(role::RECEIVER))?;
    let ok = v_prime == if b == 0 { v } else { v.xor(&x)? };
    let verdict = TranscriptVerdict { accept: ok, failed_step: (!ok).then_some(1), b: Some(b), m_b: None };
    Ok(TrialOutcome { verdict, correct: ok, step2: (0, 0), transcript: None })
}

fn summarize(config: &RunConfig, outcomes: &[TrialOutcome]) -> Result<StatsReport> {
    let trials = outcomes.len();
    let accepted = outcomes.iter().filter(|o| o.verdict.accept).count();
    let mut aborts_by_step = BTreeMap::new();
    for o in outcomes {
        if let Some(step) = o.verdict.failed_step {
            *aborts_by_step.entry(step).or_insert(0) += 1;
        }
    }
    let correct = outcomes.iter().filter(|o| o.verdict.accept && o.correct).count();
    let rate = accepted as f64 / trials as f64;
    let standard_error = (rate * (1.0 - rate) / trials as f64).sqrt();

    let honest = config.adversary == AdversaryStrategy::Honest;
    let random_b = config.protocol != Protocol::Tworound;
    let (b_frequency, b_chi_square) = if honest && random_b && accepted > 0 {
        let ones = outcomes.iter().filter(|o| o.verdict.accept && o.verdict.b == Some(1)).count() as u64;
        let zeros = accepted as u64 - ones;
        (Some(rate_check(ones, accepted as u64, 0.5)?), Some(chi_square_uniform(&[zeros, ones])?))
    } else {
        (None, None)
    };

    let opened = config.params.ell() / 2;
    let (passed, checked) = outcomes.iter().fold((0, 0), |(p, c), o| (p + o.step2.0, c + o.step2.1));
    let step2_per_index = match config.adversary {
        AdversaryStrategy::NoDelete if checked > 0 => Some(rate_check(passed as u64, checked as u64, 0.5)?),
        _ => None,
    };
    let reference = match (config.protocol, config.adversary) {
        (_, AdversaryStrategy::Honest) => Some(1.0),
        (Protocol::Oneshot, AdversaryStrategy::NoDelete) => Some(0.5f64.powi(opened as i32)),
        _ => None,
    };
    let acceptance_reference = reference.map(|p| rate_check(accepted as u64, trials as u64, p)).transpose()?;

    let pass = (!honest || correct == accepted)
        && [b_frequency, step2_per_index, acceptance_reference].iter().flatten().all(|c| c.pass)
        && b_chi_square.is_none_or(|c| c.pass);
    Ok(StatsReport {
        protocol: config.protocol,
        adversary: config.adversary,
        hybrid: config.hybrid,
        trials,
        accepted,
        acceptance_rate: rate,
        standard_error,
        aborts_by_step,
        correct,
        b_frequency,
        b_chi_square,
        step2_per_index,
        acceptance_reference,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionReport {
    pub adversary: AdversaryStrategy,
    pub force_seed: bool,
    pub trials: usize,
    pub seed_matches: usize,
    pub outputs_one: usize,
    /// Output-1 runs whose commitments and challenge fall outside the relation.
    pub counterexamples: usize,
    pub pass: bool,
}

/// Seeded runs of the seed-guessing experiment against one strategy.
pub fn run_reduction(
    params: &ProtocolParams,
    adversary: AdversaryStrategy,
    force_seed: bool,
    kind: BackendKind,
    trials: usize,
    seed: &Seed,
) -> Result<ReductionReport> {
    params.validate()?;
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let pool = worker_pool()?;
    let outcomes: Vec<Exp2Outcome> = pool.install(|| {
        (0..trials as u64)
            .into_par_iter()
            .map(|i| run_exp2(params, adversary, force_seed, kind, &mut seed.trial(i).stream(role::ADVERSARY)))
            .collect::<Result<Vec<_>>>()
    })?;
    let outputs_one = outcomes.iter().filter(|o| o.output).count();
    let counterexamples = outcomes.iter().filter(|o| o.output && !o.related).count();
    Ok(ReductionReport {
        adversary,
        force_seed,
        trials,
        seed_matches: outcomes.iter().filter(|o| o.seed_match).count(),
        outputs_one,
        counterexamples,
        pass: counterexamples == 0,
    })
}
