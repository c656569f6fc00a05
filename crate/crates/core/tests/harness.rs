use std::process::Command;

use eprot::harness::{
    deserialize_transcript, oneshot_transcript, run_trials, serialize_transcript, HybridName, Protocol, RunConfig, Seed,
    Transcript,
};
use eprot::oneshot::AdversaryStrategy;
use eprot::relations::ProtocolParams;
use eprot::Error;

fn tiny() -> ProtocolParams {
    ProtocolParams::tiny(2, 2).with_group_bits(64)
}

fn seed(byte: u8) -> Seed {
    Seed([byte; 32])
}

fn config(protocol: Protocol, params: ProtocolParams, trials: usize, s: u8) -> RunConfig {
    RunConfig::new(protocol, params, trials, seed(s))
}

fn bytes(ts: &[Transcript]) -> Vec<Vec<u8>> {
    ts.iter().map(|t| serialize_transcript(t).unwrap()).collect()
}

#[test]
fn replay_is_byte_identical() {
    for protocol in [Protocol::Oneshot, Protocol::Tworound] {
        let params = if protocol == Protocol::Tworound { ProtocolParams::tiny(4, 2).with_group_bits(64) } else { tiny() };
        let mut cfg = config(protocol, params, 20, 1);
        let a = run_trials(&cfg, true).unwrap();
        let b = run_trials(&cfg, true).unwrap();
        assert_eq!(bytes(&a.transcripts), bytes(&b.transcripts));
        assert_eq!(a.report, b.report);
        cfg.seed = seed(2);
        let c = run_trials(&cfg, true).unwrap();
        assert_ne!(bytes(&a.transcripts), bytes(&c.transcripts));
    }
}

#[test]
fn single_trial_replays_its_batch_slot() {
    // Aggregation is order-independent and each trial owns its streams, so a
    // single trial replayed alone matches its slot in a batch.
    let cfg = config(Protocol::Oneshot, tiny(), 10, 3);
    let batch = run_trials(&cfg, true).unwrap();
    let alone = oneshot_transcript(&cfg, 7).unwrap();
    assert_eq!(batch.transcripts[7], Transcript::OneShot(Box::new(alone)));
}

#[test]
fn honest_desk_runs_all_accept() {
    let cfg = config(Protocol::Oneshot, ProtocolParams::desk_oneshot().with_group_bits(128), 100, 4);
    let rep = run_trials(&cfg, false).unwrap().report;
    assert_eq!((rep.accepted, rep.correct), (100, 100));
    // b uniformity needs more than 100 runs; the acceptance target checks it.
    assert!(rep.acceptance_reference.unwrap().pass);
}

#[test]
fn no_delete_report_at_ell_8() {
    let mut cfg = config(Protocol::Oneshot, tiny(), 2_000, 5);
    cfg.adversary = AdversaryStrategy::NoDelete;
    let rep = run_trials(&cfg, false).unwrap().report;
    assert!(rep.pass, "{rep:?}");
    assert_eq!(rep.accepted + rep.aborts_by_step.values().sum::<usize>(), rep.trials);
    assert_eq!(rep.acceptance_reference.unwrap().expected, 1.0 / 16.0);
    assert!(rep.b_frequency.is_none());
}

#[test]
fn hybrid_runs_report_like_sequential() {
    for hybrid in [HybridName::Coherent, HybridName::PreGamma, HybridName::PrePostGamma] {
        let mut cfg = config(Protocol::Oneshot, tiny(), 50, 6);
        cfg.hybrid = hybrid;
        let rep = run_trials(&cfg, false).unwrap().report;
        assert_eq!(rep.accepted, 50, "{hybrid}");
    }
}

#[test]
fn skeleton_and_tworound_reports() {
    let rep = run_trials(&config(Protocol::Skeleton, tiny(), 2_000, 7), false).unwrap().report;
    assert!(rep.pass, "{rep:?}");
    assert!(rep.b_frequency.is_some());
    let rep = run_trials(&config(Protocol::Tworound, ProtocolParams::tiny(4, 2).with_group_bits(64), 200, 8), false)
        .unwrap()
        .report;
    assert!(rep.pass && rep.correct == 200, "{rep:?}");
}

#[test]
fn config_errors() {
    let mut cfg = config(Protocol::Tworound, tiny(), 1, 0);
    cfg.adversary = AdversaryStrategy::NoDelete;
    assert!(matches!(run_trials(&cfg, false), Err(Error::Config(_))));
    let cfg = config(Protocol::Oneshot, tiny(), 0, 0);
    assert!(matches!(run_trials(&cfg, false), Err(Error::Config(_))));
}

#[test]
fn transcripts_round_trip() {
    let mut all = Vec::new();
    for (i, adv) in [
        AdversaryStrategy::Honest,
        AdversaryStrategy::NoDelete,
        AdversaryStrategy::WrongCommit(0.5),
        AdversaryStrategy::InconsistentOffsets,
    ]
    .into_iter()
    .enumerate()
    {
        let mut cfg = config(Protocol::Oneshot, tiny(), 20, 10 + i as u8);
        cfg.adversary = adv;
        all.extend(run_trials(&cfg, true).unwrap().transcripts);
    }
    all.extend(run_trials(&config(Protocol::Tworound, ProtocolParams::tiny(4, 2).with_group_bits(64), 20, 9), true).unwrap().transcripts);
    assert_eq!(all.len(), 100);
    for t in &all {
        let b = serialize_transcript(t).unwrap();
        assert_eq!(&deserialize_transcript(&b).unwrap(), t);
    }
}

fn sample_json() -> serde_json::Value {
    let t = oneshot_transcript(&config(Protocol::Oneshot, tiny(), 1, 20), 0).unwrap();
    serde_json::to_value(&t).unwrap()
}

#[test]
fn field_order_is_fixed() {
    let text = serialize_transcript(&Transcript::OneShot(Box::new(
        oneshot_transcript(&config(Protocol::Oneshot, tiny(), 1, 20), 0).unwrap(),
    )))
    .unwrap();
    let text = String::from_utf8(text).unwrap();
    let keys = ["\"protocol\"", "\"params\"", "\"seed\"", "\"mode\"", "\"adversary\"", "\"sender_message\"", "\"verdict\"", "\"stats\""];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{pos:?}");
    let verdict = &text[text.find("\"verdict\"").unwrap()..];
    let vkeys = ["\"accept\"", "\"failed_step\"", "\"b\"", "\"m_b\""];
    let vpos: Vec<usize> = vkeys.iter().map(|k| verdict.find(k).unwrap()).collect();
    assert!(vpos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn unknown_field_is_named() {
    let mut v = sample_json();
    v["sender_message"]["extra_field"] = serde_json::json!(1);
    let err = deserialize_transcript(&serde_json::to_vec(&v).unwrap()).unwrap_err();
    match err {
        Error::Schema { path, message } => {
            assert!(message.contains("extra_field"), "{message}");
            assert!(path.starts_with("sender_message"), "{path}");
        }
        other => panic!("unexpected {other:?}"),
    }
    let mut v = sample_json();
    v["verdict"]["accept"] = serde_json::json!("yes");
    match deserialize_transcript(&serde_json::to_vec(&v).unwrap()).unwrap_err() {
        Error::Schema { path, .. } => assert_eq!(path, "verdict.accept"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn hex_is_lowercase_on_write_and_case_insensitive_on_read() {
    let v = sample_json();
    let u = v["sender_message"]["cms"][0]["u"].as_str().unwrap().to_string();
    assert!(u.chars().all(|c| c.is_ascii_digit() || ('a'..='f').contains(&c)));
    let seed = v["seed"].as_str().unwrap().to_string();
    let mut upper = v.clone();
    upper["sender_message"]["cms"][0]["u"] = serde_json::json!(u.to_uppercase());
    upper["seed"] = serde_json::json!(seed.to_uppercase());
    let a = deserialize_transcript(&serde_json::to_vec(&v).unwrap()).unwrap();
    let b = deserialize_transcript(&serde_json::to_vec(&upper).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(serialize_transcript(&a).unwrap(), serialize_transcript(&b).unwrap());
}

#[test]
fn golden_transcript() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/oneshot_tiny.json");
    let t = Transcript::OneShot(Box::new(oneshot_transcript(&config(Protocol::Oneshot, tiny(), 1, 42), 0).unwrap()));
    let got = serialize_transcript(&t).unwrap();
    if std::env::var_os("EPROT_UPDATE_GOLDEN").is_some() {
        std::fs::write(path, &got).unwrap();
    }
    let want = std::fs::read(path).expect("golden file; regenerate with EPROT_UPDATE_GOLDEN=1");
    assert_eq!(String::from_utf8(got).unwrap(), String::from_utf8(want).unwrap());
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eprot")).args(args).env("EPROT_WORKERS", "1").output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn cli_exit_codes() {
    let (code, out) = cli(&["verify-params"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 16);
    assert_eq!(cli(&["verify-params", "--lambda", "1", "--t", "1"]).0, 1);
    assert_eq!(cli(&["run-oneshot", "--c", "15"]).0, 2);
    assert_eq!(cli(&["attack", "sideways"]).0, 2);
    assert_eq!(cli(&["run-oneshot", "--seed", "abc"]).0, 2);
    let (code, out) = cli(&["attack", "no-delete", "--lambda", "2", "--alpha", "1/4", "--c", "4", "--group-bits", "64", "--trials", "200"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"no-delete\""));
    assert_eq!(cli(&["xor-extractor", "--trials", "20"]).0, 0);
}

#[test]
fn cli_json_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let p = path.to_str().unwrap();
    let (code, _) = cli(&["run-oneshot", "--lambda", "2", "--alpha", "1/4", "--c", "4", "--group-bits", "64", "--trials", "3", "--json-out", p]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let ts = v["transcripts"].as_array().unwrap();
    assert_eq!(ts.len(), 3);
    for t in ts {
        deserialize_transcript(&serde_json::to_vec(t).unwrap()).unwrap();
    }
}
