use eprot_quantum::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn clifford_gate(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    let pair = (0..n, 0..n).prop_filter("distinct", |(a, b)| a != b);
    prop_oneof![
        q.clone().prop_map(Gate::H),
        q.clone().prop_map(Gate::S),
        q.clone().prop_map(Gate::Sdg),
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::Y),
        q.clone().prop_map(Gate::Z),
        pair.clone().prop_map(|(a, b)| Gate::Cnot { control: a, target: b }),
        pair.prop_map(|(a, b)| Gate::Cz(a, b)),
    ]
}

#[test]
fn rejects_non_clifford() {
    let mut t = StabilizerTableau::new(2);
    assert!(matches!(t.apply(&Gate::T(0)), Err(QuantumError::NonClifford(_))));
}

#[test]
fn zero_state_measures_zero() {
    let mut t = StabilizerTableau::new(5);
    let m = t.measure(&[0, 1, 2, 3, 4], Basis::Standard, &mut rng(0)).unwrap();
    assert_eq!(m, vec![0; 5]);
}

#[test]
fn ghz_outcomes_are_equal() {
    for seed in 0..50 {
        let mut t = StabilizerTableau::new(4);
        t.apply_all(&[Gate::H(0), Gate::Cnot { control: 0, target: 1 }, Gate::Cnot { control: 1, target: 2 }, Gate::Cnot { control: 2, target: 3 }])
            .unwrap();
        let m = t.measure(&[3, 1, 0, 2], Basis::Standard, &mut rng(seed)).unwrap();
        assert!(m.iter().all(|&b| b == m[0]));
    }
}

#[test]
fn psi_projection_on_prepared_psi_accepts() {
    let (v, x) = ([1u8, 0, 1, 1], [0u8, 1, 1, 0]);
    let msg = [1, 2, 3, 4];
    let mut t = StabilizerTableau::new(5);
    t.apply_all(&psi_preparation(0, &msg, &v, &x, 1)).unwrap();
    let gens = psi_generators(5, 0, &msg, &v, &x, 1).unwrap();
    let (ok, p) = t.project_stabilizers(&gens, &mut rng(2)).unwrap();
    assert!(ok && p == 1.0);
    let gens_wrong = psi_generators(5, 0, &msg, &v, &x, 0).unwrap();
    let (ok, p) = t.project_stabilizers(&gens_wrong, &mut rng(2)).unwrap();
    assert!(!ok && p == 0.0);
}

#[test]
fn basis_state_psi_overlap_is_one_half() {
    // |0,v> has overlap 1/2 with |ψ_{v,x,h}> for every x, h.
    let msg = [1, 2];
    let mut t = StabilizerTableau::new(3);
    t.apply(&Gate::X(2)).unwrap();
    let gens = psi_generators(3, 0, &msg, &[0, 1], &[1, 0], 1).unwrap();
    let (_, p) = t.clone().project_stabilizers(&gens, &mut rng(0)).unwrap();
    assert_eq!(p, 0.5);
    let dense = psi_state(&[0, 1], &[1, 0], 1).unwrap();
    assert!((dense.fidelity(&PureState::from_bits(&[0, 0, 1]).unwrap()).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn z_support_of_bell_pair() {
    let mut t = StabilizerTableau::new(3);
    t.apply_all(&[Gate::H(0), Gate::Cnot { control: 0, target: 1 }, Gate::H(2)]).unwrap();
    // Support over qubits (0, 1): strings with even parity.
    let c = t.z_support(&[0, 1]).unwrap();
    assert_eq!(c, vec![(0b11, 0)]);
    // Qubit 0 alone is unconstrained.
    assert!(t.z_support(&[0]).unwrap().is_empty());
    let mut even = |u: u64| u.count_ones() % 2 == 0;
    assert_eq!(t.project_predicate(&[0, 1], &mut even).unwrap(), (true, 1.0));
    let mut zero_only = |u: u64| u == 0;
    assert!(matches!(t.project_predicate(&[0, 1], &mut zero_only), Err(QuantumError::NonStabilizerProjection(_))));
}

proptest! {
    #[test]
    fn tableau_matches_statevector(gates in prop::collection::vec(clifford_gate(5), 0..40)) {
        let mut t = StabilizerTableau::new(5);
        let mut s = PureState::zero(5).unwrap();
        t.apply_all(&gates).unwrap();
        s.apply_all(&gates).unwrap();
        let from_tableau = t.to_pure_state().unwrap();
        prop_assert!(from_tableau.approx_eq_up_to_phase(&s, 1e-9));
    }

    #[test]
    fn post_measurement_states_match(
        gates in prop::collection::vec(clifford_gate(4), 0..30),
        qs in prop::collection::vec((0usize..4, any::<bool>()), 1..5),
        seed in any::<u64>(),
    ) {
        let mut t = QState::zero(4, BackendKind::Stabilizer).unwrap();
        let mut s = QState::zero(4, BackendKind::Statevector).unwrap();
        t.apply_all(&gates).unwrap();
        s.apply_all(&gates).unwrap();
        let (mut ra, mut rb) = (rng(seed), rng(seed));
        for (q, had) in qs {
            let b = if had { Basis::Hadamard } else { Basis::Standard };
            prop_assert_eq!(t.measure_qubit(q, b, &mut ra).unwrap(), s.measure_qubit(q, b, &mut rb).unwrap());
        }
        prop_assert!(t.to_pure().unwrap().approx_eq_up_to_phase(&s.to_pure().unwrap(), 1e-9));
        prop_assert_eq!(ra.random::<u64>(), rb.random::<u64>());
    }
}

#[test]
fn random_clifford_circuits_agree_across_backends() {
    let rep = checks::backend_equivalence(2_000, 12, &mut rng(99)).unwrap();
    assert!(rep.pass(), "{rep:?}");
}
