use eprot::crypto::commit::ext_gen;
use eprot::crypto::Group;
use eprot::oneshot::exact::{coherent_acceptance_exact, exact_b_uniformity, gamma_bound_exponent, Mismatch};
use eprot::oneshot::sim::extract_sender_inputs;
use eprot::oneshot::{
    adversary_send, build_gamma_projector, derive_shared_string, fresh_collection, receiver_receive, run_exp2,
    sender_send, setup, sim_receiver_side, sim_sender_side, skeleton_receiver, skeleton_sender, AdversaryStrategy,
    CollectionLayout, Gamma, HybridConfig, SendOptions, SenderMessage, SenderSimOutcome, SetupMode, Verdict,
};
use eprot::relations::{parse_tuple, Extracted, ProtocolParams};
use eprot::BitString;
use eprot_quantum::{psi_state, BackendKind, Basis, Gate, QState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

const STAB: BackendKind = BackendKind::Stabilizer;

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn desk() -> ProtocolParams {
    ProtocolParams::desk_oneshot().with_group_bits(128)
}

fn tiny(lambda: usize) -> ProtocolParams {
    ProtocolParams::tiny(lambda, 2).with_group_bits(64)
}

fn three_sigma(hits: usize, n: usize, p: f64) -> bool {
    let mean = n as f64 * p;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    (hits as f64 - mean).abs() <= 3.0 * sd
}

fn honest_run(params: &ProtocolParams, mode: SetupMode, seed: u64) -> (Verdict, BitString, BitString) {
    let mut r = rng(seed);
    let mut st = setup(params, mode, STAB, &mut r).unwrap();
    let m0 = BitString::random(params.lambda, &mut r);
    let m1 = BitString::random(params.lambda, &mut r);
    let (msg, _) = sender_send(&st.public, &mut st.collections, &m0, &m1, &mut r).unwrap();
    let out = receiver_receive(&st.public, &mut st.collections, &msg, &mut r, &HybridConfig::default()).unwrap();
    (out.verdict, m0, m1)
}

#[test]
fn layout_indices() {
    let l = CollectionLayout::new(2);
    assert_eq!(l.n_qubits(), 10);
    assert_eq!((l.s_ctl, l.r_ctl), (0, 5));
    assert_eq!(l.s_msg, vec![1, 2, 3, 4]);
    assert_eq!(l.receiver_qubits(), vec![5, 6, 7, 8, 9]);
    assert_eq!(l.pairs()[1], (1, 6));
}

#[test]
fn shared_string_agrees() {
    let (a, b) = derive_shared_string(64, &mut rng(1)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 64);
    assert!(a.weight() > 0 && a.weight() < 64);
}

#[test]
fn setup_is_deterministic() {
    let p = tiny(2);
    let a = setup(&p, SetupMode::HonestCrs, STAB, &mut rng(5)).unwrap();
    let b = setup(&p, SetupMode::HonestCrs, STAB, &mut rng(5)).unwrap();
    assert_eq!(a.public.ck, b.public.ck);
    assert_eq!(a.public.crs, b.public.crs);
    assert_eq!(a.public.hk, b.public.hk);
    assert_eq!(a.collections, b.collections);
    assert!(a.ek.is_none());
    let c = setup(&p, SetupMode::ProgrammedHk, STAB, &mut rng(5)).unwrap();
    assert!(c.public.hk.is_none());
}

#[test]
fn skeleton_leaves_psi_on_receiver() {
    let mut r = rng(2);
    let lambda = 2;
    let layout = CollectionLayout::new(lambda);
    for _ in 0..20 {
        let x = BitString::random(2 * lambda, &mut r);
        let mut st = fresh_collection(&layout, BackendKind::Statevector).unwrap();
        let (v, h) = skeleton_sender(&mut st, &layout, &x, &mut r).unwrap();
        let (ok, p) = st.project_psi(layout.r_ctl, &layout.r_msg, v.bits(), x.bits(), h, &mut r).unwrap();
        assert!(ok);
        assert!((p - 1.0).abs() < 1e-9);
        // Residual state equals |0..0> on the sender half times |ψ> on the receiver half, up to phase.
        let mut full = st.to_pure().unwrap();
        full.apply(&Gate::H(layout.s_ctl)).unwrap();
        let kept = full.discard(&(0..=2 * lambda).collect::<Vec<_>>()).unwrap();
        let want = psi_state(v.bits(), x.bits(), h).unwrap();
        assert!(kept.fidelity(&want).unwrap() > 1.0 - 1e-9);
    }
}

#[test]
fn skeleton_receiver_relation_and_uniform_b() {
    let mut r = rng(3);
    let lambda = 2;
    let layout = CollectionLayout::new(lambda);
    let n = 10_000;
    let mut ones = 0;
    for _ in 0..n {
        let x = BitString::random(2 * lambda, &mut r);
        let mut st = fresh_collection(&layout, STAB).unwrap();
        let (v, _) = skeleton_sender(&mut st, &layout, &x, &mut r).unwrap();
        let (b, v2) = skeleton_receiver(&mut st, &layout, &mut r).unwrap();
        let want = if b == 0 { v.clone() } else { v.xor(&x).unwrap() };
        assert_eq!(v2, want);
        ones += b as usize;
    }
    assert!(three_sigma(ones, n, 0.5), "b = 1 in {ones} of {n}");
}

#[test]
fn honest_message_structure() {
    let p = desk();
    let mut r = rng(4);
    let mut st = setup(&p, SetupMode::HonestCrs, STAB, &mut r).unwrap();
    let m = BitString::random(4, &mut r);
    let (msg, sec) = sender_send(&st.public, &mut st.collections, &m, &m, &mut r).unwrap();
    assert_eq!(msg.openings.len(), p.ell() / 2);
    assert_eq!(msg.masked.len(), p.ell() / 2);
    assert!(msg.masked.iter().all(|t| t.z[0].len() == 8 && t.z[1].len() == 8));
    assert_eq!(sec.challenge.opened.len() + sec.challenge.unopened.len(), p.ell());
    let json = serde_json::to_string(&msg).unwrap();
    let back: SenderMessage = serde_json::from_str(&json).unwrap();
    assert_eq!(back, msg);
}

#[test]
fn honest_correctness_desk_500() {
    let p = desk();
    for seed in 0..500 {
        let (v, m0, m1) = honest_run(&p, SetupMode::HonestCrs, 10_000 + seed);
        match v {
            Verdict::Accept { b, m_b } => assert_eq!(m_b, if b == 0 { m0 } else { m1 }, "seed {seed}"),
            Verdict::Abort { step } => panic!("honest run aborted at step {step} (seed {seed})"),
        }
    }
}

#[test]
fn honest_b_uniform_desk() {
    let p = desk();
    let n = 10_000;
    let mut ones = 0;
    for seed in 0..n {
        match honest_run(&p, SetupMode::HonestCrs, 50_000 + seed as u64).0 {
            Verdict::Accept { b, .. } => ones += b as usize,
            v => panic!("{v:?}"),
        }
    }
    assert!(three_sigma(ones, n, 0.5), "b = 1 in {ones} of {n}");
}

#[test]
fn honest_step2_and_mask_algebra() {
    let p = desk();
    let mut r = rng(6);
    for _ in 0..20 {
        let mut st = setup(&p, SetupMode::ExtractMode, STAB, &mut r).unwrap();
        let m = BitString::random(4, &mut r);
        let (msg, sec) = sender_send(&st.public, &mut st.collections, &m, &m, &mut r).unwrap();
        let layout = st.public.layout.clone();
        for o in &msg.openings {
            let (ok, pr) = st.collections[o.index]
                .project_psi(layout.r_ctl, &layout.r_msg, o.v.bits(), o.x.bits(), o.h, &mut r)
                .unwrap();
            assert!(ok && (pr - 1.0).abs() < 1e-12);
        }
        // z_{i,b} ⊕ v' opens ĉm_{i,b} for both possible receiver outcomes.
        for t in &msg.masked {
            let v = &sec.v[t.index];
            let vx = v.xor(&sec.xs[t.index]).unwrap();
            for (b, vp) in [(0usize, v), (1, &vx)] {
                let opened = t.z[b].xor(vp).unwrap();
                let (tt, rr) = (opened.slice(0..4), opened.slice(4..8));
                assert!(eprot::crypto::open_verify(&st.public.ck, &t.hat_cm[b], &tt, &rr));
            }
        }
        // extraction recovers every committed tuple.
        let ek = st.ek.as_ref().unwrap();
        for (i, cm) in msg.cms.iter().enumerate() {
            let e = parse_tuple(&eprot::crypto::extract(&st.public.ck, ek, cm).unwrap(), 4).unwrap();
            assert_eq!(e, Extracted { v: sec.v[i].clone(), x: sec.xs[i].clone(), h: sec.h[i] });
        }
    }
}

#[test]
fn tampered_messages_abort_at_the_right_step() {
    let p = tiny(2);
    let mut r = rng(7);
    let fresh = |r: &mut ChaCha20Rng| {
        let mut st = setup(&p, SetupMode::HonestCrs, STAB, r).unwrap();
        let m = BitString::random(2, r);
        let (msg, _) = sender_send(&st.public, &mut st.collections, &m, &m, r).unwrap();
        (st, msg)
    };
    let run = |st: &mut eprot::oneshot::Setup, msg: &SenderMessage, r: &mut ChaCha20Rng| {
        receiver_receive(&st.public, &mut st.collections, msg, r, &HybridConfig::default()).unwrap().verdict
    };
    let (mut st, mut msg) = fresh(&mut r);
    msg.openings[0].h ^= 1;
    assert_eq!(run(&mut st, &msg, &mut r), Verdict::Abort { step: 1 });
    let (mut st, mut msg) = fresh(&mut r);
    msg.proof.tag[0] ^= 1;
    assert_eq!(run(&mut st, &msg, &mut r), Verdict::Abort { step: 3 });
    let (mut st, mut msg) = fresh(&mut r);
    for t in &mut msg.masked {
        t.z = [BitString::random(4, &mut r), BitString::random(4, &mut r)];
    }
    // Masks are outside the proof statement, so only step 4 can notice.
    assert_eq!(run(&mut st, &msg, &mut r), Verdict::Abort { step: 4 });
    let (mut st, mut msg) = fresh(&mut r);
    msg.cms.swap(0, 1);
    assert_eq!(run(&mut st, &msg, &mut r).failed_step(), Some(1));
}

#[test]
fn no_delete_per_index_and_overall_rates() {
    let p = tiny(2);
    let mut r = rng(8);
    let n = 10_000;
    let (mut pass, mut total, mut accepted) = (0, 0, 0);
    for _ in 0..n {
        let mut st = setup(&p, SetupMode::HonestCrs, STAB, &mut r).unwrap();
        let m = BitString::random(2, &mut r);
        let (msg, _) =
            adversary_send(AdversaryStrategy::NoDelete, &st.public, &mut st.collections, &m, &m, &SendOptions::default(), &mut r)
                .unwrap();
        let out = receiver_receive(&st.public, &mut st.collections, &msg, &mut r, &HybridConfig::default()).unwrap();
        assert_eq!(out.step2.len(), 4);
        pass += out.step2.iter().filter(|&&b| b).count();
        total += out.step2.len();
        accepted += usize::from(out.verdict.accepted());
    }
    assert!(three_sigma(pass, total, 0.5), "per-index pass {pass}/{total}");
    assert!(three_sigma(accepted, n, 1.0 / 16.0), "accepted {accepted}/{n}");
}

#[test]
fn wrong_commit_is_caught_at_step_2() {
    let p = desk();
    let mut r = rng(9);
    let (mut rejected, mut total) = (0, 0);
    for _ in 0..100 {
        let mut st = setup(&p, SetupMode::HonestCrs, STAB, &mut r).unwrap();
        let m = BitString::random(4, &mut r);
        let (msg, _) = adversary_send(
            AdversaryStrategy::WrongCommit(1.0),
            &st.public,
            &mut st.collections,
            &m,
            &m,
            &SendOptions::default(),
            &mut r,
        )
        .unwrap();
        let out = receiver_receive(&st.public, &mut st.collections, &msg, &mut r, &HybridConfig::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Abort { step: 2 });
        rejected += out.step2.iter().filter(|&&b| !b).count();
        total += out.step2.len();
    }
    assert!(rejected as f64 / total as f64 >= 0.9, "{rejected}/{total}");
}

#[test]
fn gamma_projector_boundaries() {
    let mut r = rng(10);
    let layout = CollectionLayout::new(1);
    let refs: Vec<(usize, Extracted)> = (0..4)
        .map(|i| (i, Extracted { v: BitString::random(2, &mut r), x: BitString::random(2, &mut r), h: r.random::<bool>() as u8 }))
        .collect();
    let prepare = |orth: usize| -> Vec<QState> {
        refs.iter()
            .enumerate()
            .map(|(k, (_, e))| {
                let mut st = QState::zero(layout.n_qubits(), STAB).unwrap();
                let h = if k < orth { e.h ^ 1 } else { e.h };
                st.apply_all(&eprot_quantum::psi_preparation(layout.r_ctl, &layout.r_msg, e.v.bits(), e.x.bits(), h)).unwrap();
                st
            })
            .collect()
    };
    // γ = 1/2 over 4 collections: fewer than 2 orthogonal ones pass.
    let g = build_gamma_projector(Gamma::new(1, 2), refs.clone());
    for (orth, want) in [(0, true), (1, true), (2, false), (4, false)] {
        let mut cols = prepare(orth);
        let (ok, e) = g.apply(&mut cols, &layout, &mut r).unwrap();
        assert_eq!(ok, want, "orth = {orth}");
        assert_eq!(e.iter().filter(|&&b| b == 1).count(), orth);
    }
    let all = build_gamma_projector(Gamma::new(1, 1), refs.clone());
    assert!(all.apply(&mut prepare(3), &layout, &mut r).unwrap().0);
    assert!(!all.apply(&mut prepare(4), &layout, &mut r).unwrap().0);
    assert!(build_gamma_projector(Gamma::new(1, 30), refs.clone()).apply(&mut prepare(0), &layout, &mut r).unwrap().0);
}

#[test]
fn hybrid_receivers_accept_honest_runs() {
    let p = tiny(2);
    let mut r = rng(11);
    for _ in 0..50 {
        let mut st = setup(&p, SetupMode::ExtractMode, STAB, &mut r).unwrap();
        let (m0, m1) = (BitString::random(2, &mut r), BitString::random(2, &mut r));
        let (msg, _) = sender_send(&st.public, &mut st.collections, &m0, &m1, &mut r).unwrap();
        let cfg = HybridConfig::pre_post_gamma(st.ek.clone().unwrap());
        match receiver_receive(&st.public, &mut st.collections, &msg, &mut r, &cfg).unwrap().verdict {
            Verdict::Accept { b, m_b } => assert_eq!(m_b, if b == 0 { m0 } else { m1 }),
            v => panic!("{v:?}"),
        }
    }
}

#[test]
fn coherent_check_matches_measure_then_check_per_seed() {
    let p = tiny(2);
    let strategies = [
        AdversaryStrategy::Honest,
        AdversaryStrategy::NoDelete,
        AdversaryStrategy::WrongCommit(0.5),
        AdversaryStrategy::InconsistentOffsets,
    ];
    for (k, s) in strategies.iter().enumerate() {
        for seed in 0..100u64 {
            let run = |coherent: bool| {
                let mut r = rng(1_000 * k as u64 + seed);
                let mut st = setup(&p, SetupMode::HonestCrs, STAB, &mut r).unwrap();
                let m = BitString::random(2, &mut r);
                let (msg, _) = adversary_send(*s, &st.public, &mut st.collections, &m, &m, &SendOptions::default(), &mut r).unwrap();
                let cfg = HybridConfig { coherent, ..Default::default() };
                let out = receiver_receive(&st.public, &mut st.collections, &msg, &mut r, &cfg).unwrap();
                (out.verdict.accepted(), out.measured)
            };
            let (a, b) = (run(false), run(true));
            assert_eq!(a.0, b.0, "{s} seed {seed}");
            if a.0 {
                assert_eq!(a.1, b.1, "{s} seed {seed}");
            }
        }
    }
}

#[test]
fn sender_simulator_extracts_inputs() {
    let p = tiny(2);
    let mut r = rng(12);
    for _ in 0..100 {
        let (m0, m1) = (BitString::random(2, &mut r), BitString::random(2, &mut r));
        let out = sim_sender_side(&p, AdversaryStrategy::Honest, &m0, &m1, STAB, &mut r).unwrap();
        assert_eq!(out.outcome, SenderSimOutcome::Extracted { m0, m1 });
    }
    let mut aborts = 0;
    for _ in 0..100 {
        let m = BitString::random(2, &mut r);
        let out = sim_sender_side(&p, AdversaryStrategy::InconsistentOffsets, &m, &m, STAB, &mut r).unwrap();
        // Offsets at the four unopened indices coincide with probability 4^-3.
        if out.outcome == SenderSimOutcome::NoCommonOffset {
            aborts += 1;
        } else {
            assert!(matches!(out.outcome, SenderSimOutcome::Extracted { .. }));
        }
    }
    assert!(aborts >= 90, "{aborts}");
}

#[test]
fn sender_simulator_at_desk_scale_with_hybrid_receiver_agreement() {
    let p = desk();
    let mut r = rng(13);
    for _ in 0..20 {
        let mut st = setup(&p, SetupMode::ExtractMode, STAB, &mut r).unwrap();
        let ek = st.ek.clone().unwrap();
        let (m0, m1) = (BitString::random(4, &mut r), BitString::random(4, &mut r));
        let (msg, _) = sender_send(&st.public, &mut st.collections, &m0, &m1, &mut r).unwrap();
        let got = extract_sender_inputs(&st.public, &ek, &mut st.collections, &msg, &mut r).unwrap();
        assert_eq!(got, SenderSimOutcome::Extracted { m0, m1 });
    }
}

#[test]
fn receiver_simulator_view_is_accepted() {
    let mut r = rng(14);
    for p in [tiny(2), desk()] {
        for _ in 0..50 {
            let b = r.random::<bool>() as u8;
            let m_b = BitString::random(p.lambda, &mut r);
            let mut view = sim_receiver_side(&p, b, &m_b, STAB, &mut r).unwrap();
            let out = receiver_receive(&view.public, &mut view.collections, &view.message, &mut r, &HybridConfig::default()).unwrap();
            assert_eq!(out.verdict, Verdict::Accept { b, m_b });
        }
    }
}

#[test]
fn exp2_honest_forced_seed_outputs_zero() {
    let p = tiny(2);
    let mut r = rng(15);
    for _ in 0..200 {
        let o = run_exp2(&p, AdversaryStrategy::Honest, true, STAB, &mut r).unwrap();
        assert!(o.seed_match && o.extracted);
        assert_eq!(o.disagreements, 0);
        assert!(!o.output);
    }
}

#[test]
fn exp2_output_implies_relation() {
    let p = tiny(2);
    let mut r = rng(16);
    let mut ones = 0;
    for _ in 0..1_000 {
        let o = run_exp2(&p, AdversaryStrategy::NoDelete, true, STAB, &mut r).unwrap();
        if o.output {
            ones += 1;
            assert!(o.related);
        }
    }
    // Opened indices agree on h with probability 2^-4 and unopened disagreement is then near certain.
    assert!(ones > 20, "{ones}");
}

#[test]
fn exp2_seed_guess_rate() {
    let p = tiny(4);
    let mut r = rng(17);
    let n = 100_000;
    let mut hits = 0;
    for _ in 0..n {
        hits += usize::from(run_exp2(&p, AdversaryStrategy::Honest, false, STAB, &mut r).unwrap().seed_match);
    }
    assert!(three_sigma(hits, n, 1.0 / 16.0), "{hits}/{n}");
}

#[test]
fn exact_b_uniformity_tiny() {
    let mut r = rng(18);
    for lambda in 1..=2 {
        for k in 1..=3 {
            for _ in 0..3 {
                let xs: Vec<BitString> = (0..k).map(|_| BitString::random(2 * lambda, &mut r)).collect();
                let td = exact_b_uniformity(lambda, &xs, Basis::Hadamard).unwrap();
                assert!(td < 1e-9, "λ = {lambda}, |T̄| = {k}: {td}");
                let leak = exact_b_uniformity(lambda, &xs, Basis::Standard).unwrap();
                assert!((leak - 0.5).abs() < 1e-9, "control: {leak}");
            }
        }
    }
    // x = 0 still hides b.
    assert!(exact_b_uniformity(1, &[BitString::zeros(2)], Basis::Hadamard).unwrap() < 1e-9);
}

#[test]
fn coherent_rejection_bound() {
    let mut r = rng(19);
    let (ck, _) = ext_gen(Group::standard(64).unwrap(), 2, &mut r);
    assert!(gamma_bound_exponent(1.0 / 30.0) < 0.0);
    let kinds = [Mismatch::Branch0, Mismatch::Branch1, Mismatch::Both];
    for n in 1..=8usize {
        // at least (1/2 - 1/30)·n mismatched indices, i.e. 30·k ≥ 14·n.
        let k = (14 * n).div_ceil(30);
        let chk = coherent_acceptance_exact(&ck, n, k, &kinds, &mut r).unwrap();
        assert_eq!(chk.mismatched, k);
        assert!(chk.accept <= chk.bound + 1e-12, "n = {n}: {} > {}", chk.accept, chk.bound);
        assert!(chk.accept <= 0.5f64.powi(k as i32) + 1e-12);
        let clean = coherent_acceptance_exact(&ck, n, 0, &kinds, &mut r).unwrap();
        assert!((clean.accept - 1.0).abs() < 1e-12);
    }
}

#[test]
fn receiver_simulator_matches_real_classical_view() {
    use eprot::crypto::ProductDomain;
    use eprot::harness::stats::chi_square_two_sample;
    use num_traits::ToPrimitive;

    let p = tiny(2);
    let domain = ProductDomain::new(p.c, p.t).unwrap();
    let cells = domain.size.to_usize().unwrap();
    assert_eq!(cells, 36);
    let n = 10_000;
    let mut r = rng(31);
    let (mut real_t, mut sim_t) = (vec![0u64; cells], vec![0u64; cells]);
    let (mut real_b, mut sim_b) = (vec![0u64; 2], vec![0u64; 2]);
    // First opened tuple's (h, v_0, v_1). Its x is PRG output in the real run and
    // uniform in the simulation; at a 2-bit seed the two are far apart.
    let (mut real_o, mut sim_o) = (vec![0u64; 8], vec![0u64; 8]);
    let cell = |o: &eprot::oneshot::OpenedTuple| (4 * o.h + 2 * o.v.bit(0) + o.v.bit(1)) as usize;
    for _ in 0..n {
        let mut st = setup(&p, SetupMode::HonestCrs, STAB, &mut r).unwrap();
        let (m0, m1) = (BitString::random(2, &mut r), BitString::random(2, &mut r));
        let (msg, sec) = sender_send(&st.public, &mut st.collections, &m0, &m1, &mut r).unwrap();
        let out = receiver_receive(&st.public, &mut st.collections, &msg, &mut r, &HybridConfig::default()).unwrap();
        let Verdict::Accept { b, .. } = out.verdict else { panic!("honest run aborted") };
        real_t[domain.rank(&sec.challenge.tuple).unwrap().to_usize().unwrap()] += 1;
        real_b[b as usize] += 1;
        real_o[cell(&msg.openings[0])] += 1;

        let b = r.random::<bool>() as u8;
        let view = sim_receiver_side(&p, b, &BitString::random(2, &mut r), STAB, &mut r).unwrap();
        sim_t[domain.rank(&view.challenge.tuple).unwrap().to_usize().unwrap()] += 1;
        sim_b[view.planted_bits.iter().fold(0, |a, x| a ^ x) as usize] += 1;
        sim_o[cell(&view.message.openings[0])] += 1;
    }
    for (name, a, b) in [("T", &real_t, &sim_t), ("b parity", &real_b, &sim_b), ("opened tuple", &real_o, &sim_o)] {
        let chi = chi_square_two_sample(a, b).unwrap();
        assert!(chi.pass, "{name}: {chi:?}");
    }
}
