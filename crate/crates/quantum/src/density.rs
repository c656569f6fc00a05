use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QuantumError, Result};
use crate::gate::check_qubits;
use crate::state::{IndexSplit, PureState};

/// Hermiticity and trace tolerance for constructed density matrices.
const DENSITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        let dim = v.len();
        let m = DMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj());
        DensityMatrix { n: psi.n_qubits(), m }
    }

    /// Validates Hermiticity, unit trace and positivity.
    pub fn from_matrix(n: usize, m: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << n;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(QuantumError::DimensionMismatch { expected: dim, got: m.nrows() });
        }
        let herm_err = (&m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max);
        if herm_err > DENSITY_TOL {
            return Err(QuantumError::InvalidDensity(format!("not Hermitian (error {herm_err:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(QuantumError::InvalidDensity(format!("trace {tr}")));
        }
        let d = DensityMatrix { n, m };
        let min_eig = d.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -DENSITY_TOL {
            return Err(QuantumError::InvalidDensity(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(d)
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1usize << n;
        let m = DMatrix::from_diagonal_element(dim, dim, Complex64::new(1.0 / dim as f64, 0.0));
        DensityMatrix { n, m }
    }

    /// Convex combination `Σ p_k ρ_k`; weights must sum to 1.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or(QuantumError::InvalidDensity("empty mixture".into()))?;
        let n = first.1.n;
        let mut m = DMatrix::zeros(1 << n, 1 << n);
        for (p, d) in parts {
            if d.n != n {
                return Err(QuantumError::DimensionMismatch { expected: n, got: d.n });
            }
            m += &d.m * Complex64::new(*p, 0.0);
        }
        DensityMatrix::from_matrix(n, m)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.m.clone().symmetric_eigenvalues().iter().copied().collect()
    }

    /// `self ⊗ other`, with `other` on the trailing qubits.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix { n: self.n + other.n, m: self.m.kronecker(&other.m) }
    }

    /// Traces out `traced`; remaining qubits keep their relative order.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<DensityMatrix> {
        check_qubits(traced, self.n)?;
        let split = IndexSplit::new(self.n, traced);
        let keep = self.n - traced.len();
        let dim = 1usize << keep;
        let mut out = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..1usize << traced.len() {
                    acc += self.m[(split.compose(t, i), split.compose(t, j))];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(DensityMatrix { n: keep, m: out })
    }

    /// Unnormalized `Π ρ Π` for a projector matrix on the full space.
    pub fn sandwich(&self, proj: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        if proj.nrows() != self.m.nrows() {
            return Err(QuantumError::DimensionMismatch { expected: self.m.nrows(), got: proj.nrows() });
        }
        Ok(proj * &self.m * proj)
    }

    /// Normalized post-measurement state `Π ρ Π / Tr(Π ρ)` and `Tr(Π ρ)`.
    pub fn project(&self, proj: &DMatrix<Complex64>) -> Result<(DensityMatrix, f64)> {
        let s = self.sandwich(proj)?;
        let p = s.trace().re;
        if p < 1e-12 {
            return Err(QuantumError::ZeroNormBranch(p));
        }
        let m = s / Complex64::new(p, 0.0);
        Ok((DensityMatrix { n: self.n, m }, p))
    }
}

/// `½ ||a - b||_1`, from the eigenvalues of the Hermitian difference.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.n != b.n {
        return Err(QuantumError::DimensionMismatch { expected: a.n, got: b.n });
    }
    let diff = &a.m - &b.m;
    let eig = diff.symmetric_eigenvalues();
    Ok(0.5 * eig.iter().map(|e| e.abs()).sum::<f64>())
}

/// Trace distance of two classical distributions (same support indexing).
pub fn classical_distance(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
