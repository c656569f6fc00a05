//! Stabilizer tableau with destabilizers.
//!
//! Rows `0..n` are destabilizers, rows `n..2n` stabilizers. Each row holds
//! packed x and z masks plus a sign bit.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{QuantumError, Result};
use crate::gate::{check_qubits, words_for, Basis, Gate, Pauli, PauliString};
use crate::sample::sample_bit;
use crate::state::{check_size, PureState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    w: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<u8>,
}

#[derive(Clone)]
struct Row {
    x: Vec<u64>,
    z: Vec<u64>,
    r: u8,
}

/// Phase exponent (power of i) picked up by the product `P1 · P2`.
fn product_phase(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> i32 {
    let mut plus = 0i32;
    let mut minus = 0i32;
    for k in 0..x1.len() {
        let (a_x, a_y, a_z) = (x1[k] & !z1[k], x1[k] & z1[k], !x1[k] & z1[k]);
        let (b_x, b_y, b_z) = (x2[k] & !z2[k], x2[k] & z2[k], !x2[k] & z2[k]);
        plus += ((a_x & b_y) | (a_y & b_z) | (a_z & b_x)).count_ones() as i32;
        minus += ((a_x & b_z) | (a_y & b_x) | (a_z & b_y)).count_ones() as i32;
    }
    plus - minus
}

fn anticommutes(x1: &[u64], z1: &[u64], x2: &[u64], z2: &[u64]) -> bool {
    let mut acc = 0u32;
    for k in 0..x1.len() {
        acc += ((x1[k] & z2[k]) ^ (z1[k] & x2[k])).count_ones();
    }
    acc % 2 == 1
}

/// Sign bit of `src · dst` given their sign bits.
fn combined_sign(src: (&[u64], &[u64], u8), dst: (&[u64], &[u64], u8)) -> u8 {
    let e = 2 * src.2 as i32 + 2 * dst.2 as i32 + product_phase(src.0, src.1, dst.0, dst.1);
    (e.rem_euclid(4) / 2) as u8
}

impl StabilizerTableau {
    /// The all-zeros state on `n` qubits.
    pub fn new(n: usize) -> Self {
        let w = words_for(n);
        let mut t = StabilizerTableau { n, w, x: vec![0; 2 * n * w], z: vec![0; 2 * n * w], r: vec![0; 2 * n] };
        for q in 0..n {
            t.x[q * w + q / 64] |= 1 << (q % 64);
            t.z[(n + q) * w + q / 64] |= 1 << (q % 64);
        }
        t
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    fn xs(&self, row: usize) -> &[u64] {
        &self.x[row * self.w..(row + 1) * self.w]
    }

    fn zs(&self, row: usize) -> &[u64] {
        &self.z[row * self.w..(row + 1) * self.w]
    }

    fn xbit(&self, row: usize, q: usize) -> u8 {
        ((self.x[row * self.w + q / 64] >> (q % 64)) & 1) as u8
    }

    fn zbit(&self, row: usize, q: usize) -> u8 {
        ((self.z[row * self.w + q / 64] >> (q % 64)) & 1) as u8
    }

    fn row(&self, i: usize) -> Row {
        Row { x: self.xs(i).to_vec(), z: self.zs(i).to_vec(), r: self.r[i] }
    }

    fn set_row(&mut self, i: usize, row: &Row) {
        let w = self.w;
        self.x[i * w..(i + 1) * w].copy_from_slice(&row.x);
        self.z[i * w..(i + 1) * w].copy_from_slice(&row.z);
        self.r[i] = row.r;
    }

    /// Row `h` becomes `row_i · row_h`.
    fn rowsum(&mut self, h: usize, i: usize) {
        let r = combined_sign((self.xs(i), self.zs(i), self.r[i]), (self.xs(h), self.zs(h), self.r[h]));
        let w = self.w;
        for k in 0..w {
            self.x[h * w + k] ^= self.x[i * w + k];
            self.z[h * w + k] ^= self.z[i * w + k];
        }
        self.r[h] = r;
    }

    /// Stabilizer generator `k` as a Pauli string.
    pub fn stabilizer(&self, k: usize) -> PauliString {
        let row = self.n + k;
        PauliString { n: self.n, x: self.xs(row).to_vec(), z: self.zs(row).to_vec(), negative: self.r[row] == 1 }
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.check(self.n)?;
        if !gate.is_clifford() {
            return Err(QuantumError::NonClifford(gate.to_string()));
        }
        match *gate {
            Gate::Cz(a, b) => {
                self.apply(&Gate::H(b))?;
                self.apply(&Gate::Cnot { control: a, target: b })?;
                return self.apply(&Gate::H(b));
            }
            Gate::Cnot { control, target } => {
                let (cw, cb) = (control / 64, control % 64);
                let (tw, tb) = (target / 64, target % 64);
                for i in 0..2 * self.n {
                    let base = i * self.w;
                    let xa = (self.x[base + cw] >> cb) & 1;
                    let za = (self.z[base + cw] >> cb) & 1;
                    let xb = (self.x[base + tw] >> tb) & 1;
                    let zb = (self.z[base + tw] >> tb) & 1;
                    self.r[i] ^= (xa & zb & (xb ^ za ^ 1)) as u8;
                    self.x[base + tw] ^= xa << tb;
                    self.z[base + cw] ^= zb << cb;
                }
                return Ok(());
            }
            _ => {}
        }
        let q = gate.qubits()[0];
        let (qw, qb) = (q / 64, q % 64);
        for i in 0..2 * self.n {
            let base = i * self.w;
            let xa = (self.x[base + qw] >> qb) & 1;
            let za = (self.z[base + qw] >> qb) & 1;
            let (nx, nz, flip) = match *gate {
                Gate::X(_) => (xa, za, za),
                Gate::Z(_) => (xa, za, xa),
                Gate::Y(_) => (xa, za, xa ^ za),
                Gate::H(_) => (za, xa, xa & za),
                Gate::S(_) => (xa, za ^ xa, xa & za),
                Gate::Sdg(_) => (xa, za ^ xa, xa & (za ^ 1)),
                _ => unreachable!("handled above"),
            };
            self.r[i] ^= flip as u8;
            self.x[base + qw] = (self.x[base + qw] & !(1 << qb)) | (nx << qb);
            self.z[base + qw] = (self.z[base + qw] & !(1 << qb)) | (nz << qb);
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply(g))
    }

    fn check_pauli(&self, p: &PauliString) -> Result<()> {
        if p.n != self.n {
            return Err(QuantumError::DimensionMismatch { expected: self.n, got: p.n });
        }
        Ok(())
    }

    /// Outcome of measuring `p` when it is determined, `None` when uniform.
    pub fn deterministic_outcome(&self, p: &PauliString) -> Result<Option<u8>> {
        self.check_pauli(p)?;
        let n = self.n;
        if (n..2 * n).any(|i| anticommutes(self.xs(i), self.zs(i), &p.x, &p.z)) {
            return Ok(None);
        }
        let mut acc = Row { x: vec![0; self.w], z: vec![0; self.w], r: 0 };
        for i in 0..n {
            if anticommutes(self.xs(i), self.zs(i), &p.x, &p.z) {
                let s = n + i;
                acc.r = combined_sign((self.xs(s), self.zs(s), self.r[s]), (&acc.x, &acc.z, acc.r));
                for k in 0..self.w {
                    acc.x[k] ^= self.x[s * self.w + k];
                    acc.z[k] ^= self.z[s * self.w + k];
                }
            }
        }
        debug_assert!(acc.x == p.x && acc.z == p.z);
        Ok(Some(acc.r ^ u8::from(p.negative)))
    }

    /// Measures `p`; outcome `m` means eigenvalue `(-1)^m`.
    pub fn measure_pauli<R: Rng + ?Sized>(&mut self, p: &PauliString, rng: &mut R) -> Result<u8> {
        match self.deterministic_outcome(p)? {
            Some(m) => Ok(m),
            None => {
                let m = sample_bit(0.5, rng);
                self.collapse_random(p, m);
                Ok(m)
            }
        }
    }

    /// Post-measurement update for a uniformly random outcome `m`.
    fn collapse_random(&mut self, p: &PauliString, m: u8) {
        let n = self.n;
        let pivot = (n..2 * n)
            .find(|&i| anticommutes(self.xs(i), self.zs(i), &p.x, &p.z))
            .expect("random outcome requires an anticommuting stabilizer");
        for i in 0..2 * n {
            if i != pivot && anticommutes(self.xs(i), self.zs(i), &p.x, &p.z) {
                self.rowsum(i, pivot);
            }
        }
        let prow = self.row(pivot);
        self.set_row(pivot - n, &prow);
        let new = Row { x: p.x.clone(), z: p.z.clone(), r: m ^ u8::from(p.negative) };
        self.set_row(pivot, &new);
    }

    pub fn measure_qubit<R: Rng + ?Sized>(&mut self, q: usize, basis: Basis, rng: &mut R) -> Result<u8> {
        check_qubits(&[q], self.n)?;
        if basis == Basis::Hadamard {
            self.apply(&Gate::H(q))?;
        }
        let m = self.measure_pauli(&PauliString::z_on(self.n, q)?, rng)?;
        if basis == Basis::Hadamard {
            self.apply(&Gate::H(q))?;
        }
        Ok(m)
    }

    pub fn measure<R: Rng + ?Sized>(&mut self, qubits: &[usize], basis: Basis, rng: &mut R) -> Result<Vec<u8>> {
        check_qubits(qubits, self.n)?;
        qubits.iter().map(|&q| self.measure_qubit(q, basis, rng)).collect()
    }

    /// Two-outcome measurement onto the common +1 eigenspace of `generators`.
    ///
    /// One draw decides acceptance. On acceptance the state is the
    /// normalized projection. On rejection the generators are measured
    /// and resampled until some outcome is -1, which is a refinement of
    /// the rejecting branch rather than its normalized projection.
    pub fn project_stabilizers<R: Rng + ?Sized>(
        &mut self,
        generators: &[PauliString],
        rng: &mut R,
    ) -> Result<(bool, f64)> {
        let mut forced = self.clone();
        let mut p = 1.0;
        for g in generators {
            match forced.deterministic_outcome(g)? {
                Some(0) => {}
                Some(_) => {
                    p = 0.0;
                    break;
                }
                None => {
                    p *= 0.5;
                    forced.collapse_random(g, 0);
                }
            }
        }
        let accepted = sample_bit(p, rng) == 0;
        if accepted {
            *self = forced;
            return Ok((true, p));
        }
        loop {
            let mut trial = self.clone();
            let mut any_minus = false;
            for g in generators {
                any_minus |= trial.measure_pauli(g, rng)? == 1;
            }
            if any_minus {
                *self = trial;
                return Ok((false, p));
            }
        }
    }

    /// Linear constraints `parity(u & mask) = bit` describing the
    /// standard-basis support of `qubits` (first listed qubit is the MSB of `u`).
    pub fn z_support(&self, qubits: &[usize]) -> Result<Vec<(u64, u8)>> {
        check_qubits(qubits, self.n)?;
        if qubits.len() > 63 {
            return Err(QuantumError::TooManyQubits { requested: qubits.len(), limit: 63 });
        }
        let n = self.n;
        let mut rows: Vec<Row> = (n..2 * n).map(|i| self.row(i)).collect();
        let mut used = vec![false; n];
        let mut columns: Vec<(bool, usize)> = (0..n).map(|q| (true, q)).collect();
        columns.extend((0..n).filter(|q| !qubits.contains(q)).map(|q| (false, q)));
        for (is_x, q) in columns {
            let bit = |r: &Row| {
                let words = if is_x { &r.x } else { &r.z };
                (words[q / 64] >> (q % 64)) & 1 == 1
            };
            let Some(piv) = (0..n).find(|&i| !used[i] && bit(&rows[i])) else { continue };
            used[piv] = true;
            let src = rows[piv].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != piv && bit(row) {
                    row.r = combined_sign((&src.x, &src.z, src.r), (&row.x, &row.z, row.r));
                    for k in 0..self.w {
                        row.x[k] ^= src.x[k];
                        row.z[k] ^= src.z[k];
                    }
                }
            }
        }
        let k = qubits.len();
        let mut out = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            if used[i] {
                continue;
            }
            let mut mask = 0u64;
            for (j, &q) in qubits.iter().enumerate() {
                if (row.z[q / 64] >> (q % 64)) & 1 == 1 {
                    mask |= 1 << (k - 1 - j);
                }
            }
            out.push((mask, row.r));
        }
        Ok(out)
    }

    /// Two-outcome diagonal projection on `qubits`. Only supported when the
    /// predicate accepts all or none of the support; otherwise the result
    /// would leave the stabilizer formalism.
    pub fn project_predicate(&mut self, qubits: &[usize], pred: &mut dyn FnMut(u64) -> bool) -> Result<(bool, f64)> {
        let constraints = self.z_support(qubits)?;
        let mut total = 0u64;
        let mut hits = 0u64;
        for u in 0..1u64 << qubits.len() {
            if constraints.iter().all(|&(m, b)| ((u & m).count_ones() as u8 & 1) == b) {
                total += 1;
                if pred(u) {
                    hits += 1;
                }
            }
        }
        let p = hits as f64 / total as f64;
        if hits != 0 && hits != total {
            return Err(QuantumError::NonStabilizerProjection(p));
        }
        Ok((hits == total, p))
    }

    /// Dense amplitudes of the stabilized state, fixed up to global phase.
    pub fn to_pure_state(&self) -> Result<PureState> {
        check_size(self.n)?;
        // A basis state in the support: measure every qubit, taking outcome 0 when free.
        let mut probe = self.clone();
        let mut idx = 0usize;
        for q in 0..self.n {
            let z = PauliString::z_on(self.n, q)?;
            let bit = match probe.deterministic_outcome(&z)? {
                Some(m) => m,
                None => {
                    probe.collapse_random(&z, 0);
                    0
                }
            };
            idx |= (bit as usize) << (self.n - 1 - q);
        }
        let mut v = PureState::basis(self.n, idx)?;
        for k in 0..self.n {
            let img = v.pauli_image(&self.stabilizer(k))?;
            let amps: Vec<Complex64> =
                v.amplitudes().iter().zip(img.amplitudes()).map(|(a, b)| (a + b) * 0.5).collect();
            v = PureState::normalized(self.n, amps)?;
        }
        Ok(v)
    }

    pub fn pauli_at(&self, row: usize, q: usize) -> Pauli {
        match (self.xbit(row, q), self.zbit(row, q)) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (1, 1) => Pauli::Y,
            _ => Pauli::Z,
        }
    }
}
