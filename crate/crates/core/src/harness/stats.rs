//! Frequency and χ² tests with the suite's pass thresholds: 3σ and `p > 0.01`.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

pub const SIGMAS: f64 = 3.0;
pub const P_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateCheck {
    pub hits: u64,
    pub trials: u64,
    pub rate: f64,
    pub expected: f64,
    /// Deviation in standard errors of the expected rate.
    pub z: f64,
    pub pass: bool,
}

/// Whether `hits` out of `trials` is within 3σ of probability `p`.
pub fn rate_check(hits: u64, trials: u64, p: f64) -> Result<RateCheck> {
    if trials == 0 {
        return Err(Error::Config("rate check on zero trials".into()));
    }
    let n = trials as f64;
    let rate = hits as f64 / n;
    let sd = (p * (1.0 - p) / n).sqrt();
    let z = if sd > 0.0 {
        (rate - p) / sd
    } else if rate == p {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(RateCheck { hits, trials, rate, expected: p, z, pass: z.abs() <= SIGMAS })
}

/// Fair-coin test on a bit sample.
pub fn uniformity_test(bits: &[u8]) -> Result<RateCheck> {
    if bits.is_empty() {
        return Err(Error::Config("uniformity test on an empty sample".into()));
    }
    rate_check(bits.iter().filter(|&&b| b == 1).count() as u64, bits.len() as u64, 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p: f64,
    pub pass: bool,
}

fn chi_result(statistic: f64, dof: usize) -> Result<ChiSquare> {
    if dof == 0 {
        return Err(Error::Config("χ² test needs at least two cells".into()));
    }
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Config(e.to_string()))?;
    let p = 1.0 - dist.cdf(statistic);
    Ok(ChiSquare { statistic, dof, p, pass: p > P_THRESHOLD })
}

/// Goodness of fit against expected counts. Cells with zero expectation
/// must be empty and do not count towards the degrees of freedom.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> Result<ChiSquare> {
    if observed.len() != expected.len() {
        return Err(Error::Length { expected: expected.len(), got: observed.len() });
    }
    if observed.is_empty() {
        return Err(Error::Config("χ² test on no cells".into()));
    }
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &e) in observed.iter().zip(expected) {
        if e > 0.0 {
            stat += (o as f64 - e).powi(2) / e;
            cells += 1;
        } else if o > 0 {
            stat = f64::INFINITY;
        }
    }
    chi_result(stat, cells.saturating_sub(1))
}

/// Goodness of fit against the uniform distribution over the cells.
pub fn chi_square_uniform(observed: &[u64]) -> Result<ChiSquare> {
    let n: u64 = observed.iter().sum();
    let e = n as f64 / observed.len().max(1) as f64;
    chi_square(observed, &vec![e; observed.len()])
}

/// Test of independence on a contingency table of rows × columns.
pub fn chi_square_independence(table: &[Vec<u64>]) -> Result<ChiSquare> {
    let rows = table.len();
    let cols = table.first().map_or(0, Vec::len);
    if rows < 2 || cols < 2 || table.iter().any(|r| r.len() != cols) {
        return Err(Error::Config("contingency table must be at least 2×2 and rectangular".into()));
    }
    let row_sums: Vec<f64> = table.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let col_sums: Vec<f64> = (0..cols).map(|j| table.iter().map(|r| r[j]).sum::<u64>() as f64).collect();
    let n: f64 = row_sums.iter().sum();
    let mut stat = 0.0;
    for (i, r) in table.iter().enumerate() {
        for (j, &o) in r.iter().enumerate() {
            let e = row_sums[i] * col_sums[j] / n;
            if e > 0.0 {
                stat += (o as f64 - e).powi(2) / e;
            }
        }
    }
    let live_rows = row_sums.iter().filter(|&&s| s > 0.0).count();
    let live_cols = col_sums.iter().filter(|&&s| s > 0.0).count();
    chi_result(stat, live_rows.saturating_sub(1) * live_cols.saturating_sub(1))
}

/// Two-sample homogeneity test on matched histograms.
pub fn chi_square_two_sample(a: &[u64], b: &[u64]) -> Result<ChiSquare> {
    if a.len() != b.len() {
        return Err(Error::Length { expected: a.len(), got: b.len() });
    }
    chi_square_independence(&[a.to_vec(), b.to_vec()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_check_edges() {
        assert!(rate_check(5000, 10_000, 0.5).unwrap().pass);
        assert!(!rate_check(0, 10_000, 0.5).unwrap().pass);
        assert!(rate_check(0, 10, 0.0).unwrap().pass);
        assert!(!rate_check(1, 10, 0.0).unwrap().pass);
        assert!(rate_check(1, 0, 0.5).is_err());
        assert!(uniformity_test(&[]).is_err());
    }

    #[test]
    fn chi_square_reference_value() {
        // Upper tails on one degree of freedom: 0.0455 at 4, 0.3173 at 1.
        let c = chi_square(&[60, 40], &[50.0, 50.0]).unwrap();
        assert!((c.statistic - 4.0).abs() < 1e-12);
        assert!((c.p - 0.0455).abs() < 1e-3);
        let c = chi_square(&[55, 45], &[50.0, 50.0]).unwrap();
        assert!((c.p - 0.3173).abs() < 1e-3);
    }

    #[test]
    fn independence_of_product_table() {
        let c = chi_square_independence(&[vec![10, 20], vec![30, 60]]).unwrap();
        assert!(c.statistic.abs() < 1e-12 && c.pass);
    }
}
