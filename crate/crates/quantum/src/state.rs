//! Dense statevector. Qubit 0 is the most significant bit of the basis index.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{QuantumError, Result};
use crate::gate::{check_qubits, Basis, Gate, Pauli, PauliString};
use crate::sample::{sample_bit, AMP_EPS, PROB_EPS, STATE_TOL};

/// Largest register the dense backend accepts.
pub const MAX_DENSE_QUBITS: usize = 22;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<Complex64>,
}

/// A subspace to project onto, acting on a list of qubits.
pub enum Subspace<'a> {
    /// Span of one normalized state on the listed qubits.
    Rank1(&'a PureState),
    /// Span of the basis strings (over the listed qubits) accepted by the predicate.
    Predicate(&'a mut dyn FnMut(u64) -> bool),
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n > MAX_DENSE_QUBITS {
        return Err(QuantumError::TooManyQubits { requested: n, limit: MAX_DENSE_QUBITS });
    }
    Ok(())
}

/// Splits full basis indices into (listed-qubit index, remaining index).
/// The first listed qubit is the most significant bit of the sub-index.
pub(crate) struct IndexSplit {
    n: usize,
    listed: Vec<usize>,
    rest: Vec<usize>,
}

impl IndexSplit {
    pub(crate) fn new(n: usize, listed: &[usize]) -> Self {
        let rest = (0..n).filter(|q| !listed.contains(q)).collect();
        IndexSplit { n, listed: listed.to_vec(), rest }
    }

    fn bit(&self, idx: usize, q: usize) -> usize {
        (idx >> (self.n - 1 - q)) & 1
    }

    pub(crate) fn sub(&self, idx: usize) -> usize {
        self.listed.iter().fold(0, |acc, &q| (acc << 1) | self.bit(idx, q))
    }

    pub(crate) fn rest(&self, idx: usize) -> usize {
        self.rest.iter().fold(0, |acc, &q| (acc << 1) | self.bit(idx, q))
    }

    pub(crate) fn compose(&self, sub: usize, rest: usize) -> usize {
        let mut idx = 0;
        let k = self.listed.len();
        for (i, &q) in self.listed.iter().enumerate() {
            idx |= ((sub >> (k - 1 - i)) & 1) << (self.n - 1 - q);
        }
        let r = self.rest.len();
        for (i, &q) in self.rest.iter().enumerate() {
            idx |= ((rest >> (r - 1 - i)) & 1) << (self.n - 1 - q);
        }
        idx
    }

    pub(crate) fn rest_len(&self) -> usize {
        self.rest.len()
    }
}

impl PureState {
    pub fn zero(n: usize) -> Result<Self> {
        PureState::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_size(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(QuantumError::DimensionMismatch { expected: dim, got: index });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(PureState { n, amps })
    }

    /// Basis state from a bit list, first bit on qubit 0.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let idx = bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b & 1) as usize);
        PureState::basis(bits.len(), idx)
    }

    /// Builds a state from raw amplitudes; they must already be normalized.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(n)?;
        if amps.len() != 1 << n {
            return Err(QuantumError::DimensionMismatch { expected: 1 << n, got: amps.len() });
        }
        let s = PureState { n, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(s)
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(n: usize, mut amps: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm < PROB_EPS {
            return Err(QuantumError::ZeroNormBranch(norm));
        }
        let s = norm.sqrt();
        for a in amps.iter_mut() {
            *a /= s;
        }
        PureState::from_amplitudes(n, amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.n != other.n {
            return Err(QuantumError::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Tensor product with `other` placed after `self`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let n = self.n + other.n;
        check_size(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(PureState { n, amps })
    }

    /// Nonzero entries as (basis string, re, im), magnitude above 1e-12.
    pub fn debug_entries(&self) -> Vec<(String, f64, f64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > AMP_EPS)
            .map(|(i, a)| (format!("{:0width$b}", i, width = self.n), a.re, a.im))
            .collect()
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let mask = self.mask(q);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn phase_on_one(&mut self, q: usize, phase: Complex64) {
        let mask = self.mask(q);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask != 0 {
                *a *= phase;
            }
        }
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.check(self.n)?;
        let i = Complex64::new(0.0, 1.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match *gate {
            Gate::X(q) => {
                let mask = self.mask(q);
                for k in 0..self.amps.len() {
                    if k & mask == 0 {
                        self.amps.swap(k, k | mask);
                    }
                }
            }
            Gate::Y(q) => self.apply_1q(q, [[ZERO, -i], [i, ZERO]]),
            Gate::Z(q) => self.phase_on_one(q, -ONE),
            Gate::H(q) => {
                let hh = Complex64::new(h, 0.0);
                self.apply_1q(q, [[hh, hh], [hh, -hh]])
            }
            Gate::S(q) => self.phase_on_one(q, i),
            Gate::Sdg(q) => self.phase_on_one(q, -i),
            Gate::T(q) => self.phase_on_one(q, Complex64::new(h, h)),
            Gate::Cnot { control, target } => {
                let (cm, tm) = (self.mask(control), self.mask(target));
                for k in 0..self.amps.len() {
                    if k & cm != 0 && k & tm == 0 {
                        self.amps.swap(k, k | tm);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let m = self.mask(a) | self.mask(b);
                for (k, amp) in self.amps.iter_mut().enumerate() {
                    if k & m == m {
                        *amp = -*amp;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply(g))
    }

    /// Returns `P|self>` without normalization concerns (P is unitary).
    pub fn pauli_image(&self, p: &PauliString) -> Result<PureState> {
        if p.n_qubits() != self.n {
            return Err(QuantumError::DimensionMismatch { expected: self.n, got: p.n_qubits() });
        }
        let mut out = self.clone();
        for q in 0..self.n {
            match p.get(q) {
                Pauli::I => {}
                Pauli::X => out.apply(&Gate::X(q))?,
                Pauli::Y => out.apply(&Gate::Y(q))?,
                Pauli::Z => out.apply(&Gate::Z(q))?,
            }
        }
        if p.negative {
            for a in out.amps.iter_mut() {
                *a = -*a;
            }
        }
        Ok(out)
    }

    /// Probability that qubit `q` reads 0 in the standard basis.
    pub fn prob_zero(&self, q: usize) -> Result<f64> {
        check_qubits(&[q], self.n)?;
        let mask = self.mask(q);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    fn collapse_qubit(&mut self, q: usize, outcome: u8, p: f64) -> Result<()> {
        if p < PROB_EPS {
            return Err(QuantumError::ZeroNormBranch(p));
        }
        let mask = self.mask(q);
        let s = p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            let bit = u8::from(i & mask != 0);
            if bit == outcome {
                *a /= s;
            } else {
                *a = ZERO;
            }
        }
        Ok(())
    }

    pub fn measure_qubit<R: Rng + ?Sized>(&mut self, q: usize, basis: Basis, rng: &mut R) -> Result<u8> {
        if basis == Basis::Hadamard {
            self.apply(&Gate::H(q))?;
        }
        let p0 = self.prob_zero(q)?;
        let outcome = sample_bit(p0, rng);
        let p = if outcome == 0 { p0 } else { 1.0 - p0 };
        self.collapse_qubit(q, outcome, p)?;
        if basis == Basis::Hadamard {
            self.apply(&Gate::H(q))?;
        }
        Ok(outcome)
    }

    /// Measures the listed qubits in order. The register keeps its dimension.
    pub fn measure<R: Rng + ?Sized>(&mut self, qubits: &[usize], basis: Basis, rng: &mut R) -> Result<Vec<u8>> {
        check_qubits(qubits, self.n)?;
        qubits.iter().map(|&q| self.measure_qubit(q, basis, rng)).collect()
    }

    /// Measures the observable `p`; outcome `m` means eigenvalue `(-1)^m`.
    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &PauliString, rng: &mut R) -> Result<u8> {
        let image = self.pauli_image(p)?;
        let plus: Vec<Complex64> = self.amps.iter().zip(&image.amps).map(|(a, b)| (a + b) * 0.5).collect();
        let p0: f64 = plus.iter().map(|a| a.norm_sqr()).sum();
        let outcome = sample_bit(p0, rng);
        let branch: Vec<Complex64> = if outcome == 0 {
            plus
        } else {
            self.amps.iter().zip(&image.amps).map(|(a, b)| (a - b) * 0.5).collect()
        };
        let norm: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
        if norm < PROB_EPS {
            return Err(QuantumError::ZeroNormBranch(norm));
        }
        let s = norm.sqrt();
        self.amps = branch.into_iter().map(|a| a / s).collect();
        Ok(outcome)
    }

    /// Two-outcome measurement `{Π, I-Π}` with Π the subspace on `qubits`
    /// tensored with identity. Returns (accepted, Pr[accept]).
    pub fn project<R: Rng + ?Sized>(
        &mut self,
        qubits: &[usize],
        subspace: Subspace<'_>,
        rng: &mut R,
    ) -> Result<(bool, f64)> {
        check_qubits(qubits, self.n)?;
        let split = IndexSplit::new(self.n, qubits);
        let projected: Vec<Complex64> = match subspace {
            Subspace::Rank1(phi) => {
                if phi.n != qubits.len() {
                    return Err(QuantumError::DimensionMismatch { expected: qubits.len(), got: phi.n });
                }
                let mut coeff = vec![ZERO; 1 << split.rest_len()];
                for (i, a) in self.amps.iter().enumerate() {
                    coeff[split.rest(i)] += phi.amps[split.sub(i)].conj() * a;
                }
                (0..self.amps.len()).map(|i| phi.amps[split.sub(i)] * coeff[split.rest(i)]).collect()
            }
            Subspace::Predicate(pred) => {
                let mut cache: Vec<Option<bool>> = vec![None; 1 << qubits.len()];
                self.amps
                    .iter()
                    .enumerate()
                    .map(|(i, a)| {
                        if a.norm() <= AMP_EPS {
                            return ZERO;
                        }
                        let s = split.sub(i);
                        let keep = *cache[s].get_or_insert_with(|| pred(s as u64));
                        if keep {
                            *a
                        } else {
                            ZERO
                        }
                    })
                    .collect()
            }
        };
        let p: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
        let accepted = sample_bit(p, rng) == 0;
        let branch: Vec<Complex64> = if accepted {
            projected
        } else {
            self.amps.iter().zip(&projected).map(|(a, b)| a - b).collect()
        };
        let norm: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
        if norm < PROB_EPS {
            return Err(QuantumError::ZeroNormBranch(norm));
        }
        let s = norm.sqrt();
        self.amps = branch.into_iter().map(|a| a / s).collect();
        Ok((accepted, p.clamp(0.0, 1.0)))
    }

    /// Removes qubits that sit in a definite standard-basis value.
    pub fn discard(&self, qubits: &[usize]) -> Result<PureState> {
        check_qubits(qubits, self.n)?;
        let mut value = 0usize;
        let split = IndexSplit::new(self.n, qubits);
        for (k, &q) in qubits.iter().enumerate() {
            let p0 = self.prob_zero(q)?;
            let bit = if p0 > 1.0 - STATE_TOL {
                0
            } else if p0 < STATE_TOL {
                1
            } else {
                return Err(QuantumError::NotClassical(q));
            };
            value |= bit << (qubits.len() - 1 - k);
        }
        let m = self.n - qubits.len();
        let amps = (0..1usize << m).map(|r| self.amps[split.compose(value, r)]).collect();
        PureState::normalized(m, amps)
    }

    /// Equality up to a global phase.
    pub fn approx_eq_up_to_phase(&self, other: &PureState, tol: f64) -> bool {
        self.n == other.n && self.fidelity(other).map(|f| (f - 1.0).abs() <= tol).unwrap_or(false)
    }
}
