//! Randomized self-checks of the simulator against its mathematical oracles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::backend::{BackendKind, Op, QState};
use crate::density::{trace_distance, DensityMatrix};
use crate::error::Result;
use crate::gate::{Basis, Gate, Pauli, PauliString};
use crate::ops::xor_extract_exact;
use crate::state::PureState;

fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0)
}

fn distinct_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let b = (a + rng.random_range(1..n)) % n;
    (a, b)
}

/// Random circuit of Clifford gates interleaved with single-qubit and
/// Pauli-product measurements.
pub fn random_clifford_circuit<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> Vec<Op> {
    (0..len)
        .map(|_| {
            let q = rng.random_range(0..n);
            match rng.random_range(0..12) {
                0 => Op::Gate(Gate::H(q)),
                1 => Op::Gate(Gate::S(q)),
                2 => Op::Gate(Gate::Sdg(q)),
                3 => Op::Gate(Gate::X(q)),
                4 => Op::Gate(Gate::Y(q)),
                5 => Op::Gate(Gate::Z(q)),
                6 | 7 if n > 1 => {
                    let (control, target) = distinct_pair(n, rng);
                    Op::Gate(Gate::Cnot { control, target })
                }
                8 if n > 1 => {
                    let (a, b) = distinct_pair(n, rng);
                    Op::Gate(Gate::Cz(a, b))
                }
                9 => Op::Measure(q, if rng.random() { Basis::Hadamard } else { Basis::Standard }),
                10 => {
                    let terms: Vec<(usize, Pauli)> = (0..n)
                        .filter_map(|k| match rng.random_range(0..4) {
                            1 => Some((k, Pauli::X)),
                            2 => Some((k, Pauli::Y)),
                            3 => Some((k, Pauli::Z)),
                            _ => None,
                        })
                        .collect();
                    let p = PauliString::from_terms(n, &terms, rng.random()).expect("distinct qubits");
                    Op::MeasurePauli(p)
                }
                _ => Op::Measure(q, Basis::Standard),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub trials: usize,
    pub mismatches: usize,
    /// Index of the first trial whose outcomes differed.
    pub first_mismatch: Option<usize>,
}

impl EquivalenceReport {
    pub fn pass(&self) -> bool {
        self.mismatches == 0
    }
}

/// Runs `trials` random Clifford circuits on 1..=`max_qubits` qubits through
/// both backends from identical random streams and compares every outcome.
pub fn backend_equivalence<R: Rng + Clone>(trials: usize, max_qubits: usize, rng: &mut R) -> Result<EquivalenceReport> {
    let mut report = EquivalenceReport { trials, mismatches: 0, first_mismatch: None };
    for trial in 0..trials {
        let n = rng.random_range(1..=max_qubits);
        let len = rng.random_range(1..=6 * n);
        let ops = random_clifford_circuit(n, len, rng);
        let (mut ra, mut rb) = (rng.clone(), rng.clone());
        let a = QState::zero(n, BackendKind::Stabilizer)?.run(&ops, &mut ra)?;
        let b = QState::zero(n, BackendKind::Statevector)?.run(&ops, &mut rb)?;
        let same_stream = ra.random::<u64>() == rb.random::<u64>();
        if a != b || !same_stream {
            report.mismatches += 1;
            report.first_mismatch.get_or_insert(trial);
        }
        // Advance the outer stream so trials do not share measurement randomness.
        let _: u64 = rng.random();
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub draws: usize,
    pub violations: usize,
    /// Largest observed `lhs - rhs` of the checked inequality.
    pub worst_slack: f64,
}

impl DistanceReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

fn orthonormalize(vectors: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for mut v in vectors {
        for b in &basis {
            let c: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|c| c / norm).collect());
        }
    }
    basis
}

/// Random mixed state on `n` qubits concentrated near one pure direction.
fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (DensityMatrix, Vec<Complex64>) {
    let dim = 1usize << n;
    let main: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
    let main = orthonormalize(vec![main]).remove(0);
    let noise = rng.random::<f64>().powi(2);
    let mut parts = vec![(1.0 - noise, DensityMatrix::from_pure(&PureState::from_amplitudes(n, main.clone()).expect("unit")))];
    let k = rng.random_range(1..=dim);
    for _ in 0..k {
        let amps = (0..dim).map(|_| random_complex(rng)).collect();
        parts.push((noise / k as f64, DensityMatrix::from_pure(&PureState::normalized(n, amps).expect("nonzero"))));
    }
    (DensityMatrix::mixture(&parts).expect("valid mixture"), main)
}

/// Projector onto a small perturbation of `main`, extended by random directions.
fn random_projector<R: Rng + ?Sized>(main: &[Complex64], rng: &mut R) -> DMatrix<Complex64> {
    let dim = main.len();
    let eps = rng.random::<f64>() * 0.5;
    let lead: Vec<Complex64> = main.iter().map(|&c| c + random_complex(rng) * eps).collect();
    let mut vectors = vec![lead];
    for _ in 0..rng.random_range(0..dim) {
        vectors.push((0..dim).map(|_| random_complex(rng)).collect());
    }
    let basis = orthonormalize(vectors);
    let mut proj = DMatrix::zeros(dim, dim);
    for b in &basis {
        for i in 0..dim {
            for j in 0..dim {
                proj[(i, j)] += b[i] * b[j].conj();
            }
        }
    }
    proj
}

/// Draws `(ρ, Π)` pairs on 1..=3 qubits and checks `TD(ρ, ΠρΠ/Tr(Πρ)) ≤ 2√δ`
/// with `δ = 1 − Tr(Πρ)`.
pub fn gentle_measurement<R: Rng + ?Sized>(draws: usize, rng: &mut R) -> Result<DistanceReport> {
    let mut report = DistanceReport { draws: 0, violations: 0, worst_slack: f64::NEG_INFINITY };
    while report.draws < draws {
        let n = rng.random_range(1..=3);
        let (rho, main) = random_density(n, rng);
        let proj = random_projector(&main, rng);
        let Ok((post, p)) = rho.project(&proj) else { continue };
        let delta = (1.0 - p).max(0.0);
        let slack = trace_distance(&rho, &post)? - 2.0 * delta.sqrt();
        report.draws += 1;
        report.worst_slack = report.worst_slack.max(slack);
        if slack > 1e-9 {
            report.violations += 1;
        }
    }
    Ok(report)
}

/// Random pure state on an `n`-qubit register `X` followed by `aux` qubits,
/// supported only where `X` has Hamming weight below `n/2`.
pub fn low_weight_state<R: Rng + ?Sized>(n: usize, aux: usize, rng: &mut R) -> Result<PureState> {
    let total = n + aux;
    let amps = (0..1usize << total)
        .map(|idx| {
            let x = idx >> aux;
            if 2 * (x.count_ones() as usize) < n {
                random_complex(rng)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    PureState::normalized(total, amps)
}

/// For random low-weight states with `n ≤ 4` and up to two auxiliary qubits,
/// compares the exact (auxiliary, parity) state with `Tr_X ⊗ I/2`.
pub fn xor_extractor<R: Rng + ?Sized>(draws: usize, rng: &mut R) -> Result<DistanceReport> {
    let mut report = DistanceReport { draws, violations: 0, worst_slack: f64::NEG_INFINITY };
    for _ in 0..draws {
        let n = rng.random_range(1..=4);
        let aux = rng.random_range(0..=2);
        let psi = low_weight_state(n, aux, rng)?;
        let x: Vec<usize> = (0..n).collect();
        let joint = xor_extract_exact(&psi, &x)?;
        let expected = DensityMatrix::from_pure(&psi).partial_trace(&x)?.tensor(&DensityMatrix::maximally_mixed(1));
        let td = trace_distance(&joint, &expected)?;
        report.worst_slack = report.worst_slack.max(td);
        if td > 1e-9 {
            report.violations += 1;
        }
    }
    Ok(report)
}
