use eprot_quantum::BackendKind;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use super::{run_honest, selection_strings, setup_tworound, Ot2cVerdict};
use crate::bits::BitString;
use crate::crypto::combin::binomial;
use crate::crypto::uhash;
use crate::error::{Error, Result};
use crate::harness::stats::{chi_square_independence, chi_square_uniform, rate_check, ChiSquare, RateCheck};
use crate::oneshot::SetupMode;
use crate::relations::ProtocolParams;

/// `Pr[|T̄∖U| < ℓ/5]` when each of the `ℓ/2` unopened indices leaves `U` by a fair coin.
pub fn conjugate_tail(ell: usize) -> f64 {
    let n = ell / 2;
    let hits: BigUint = (0..=n).filter(|&k| 5 * k < ell).map(|k| binomial(n, k)).sum();
    hits.to_f64().unwrap_or(f64::NAN) / 2f64.powi(n as i32)
}

/// `Pr[V_{1-b} = 0]`: each unopened index is in `U` or contributes a zero bit with probability 3/4.
pub fn zero_input_probability(ell: usize) -> f64 {
    0.75f64.powi((ell / 2) as i32)
}

#[derive(Debug, Clone, Serialize)]
pub struct PaReport {
    pub trials: usize,
    /// Runs whose hash input is empty or all zero. A linear hash sends these
    /// to zero, so they are excluded from the χ² tests and checked separately.
    pub degenerate: usize,
    /// Rate of degenerate inputs against `(3/4)^{ℓ/2}`.
    pub zero_input: RateCheck,
    /// Uniformity of `F(s, V_{1-b})` over all `2^λ` values.
    pub uniform: ChiSquare,
    /// Independence of the top four output bits from `b`.
    pub independent_of_b: ChiSquare,
    /// Rate of `|T̄∖U| < ℓ/5` against its exact binomial probability.
    pub conjugate_shortfall: RateCheck,
}

impl PaReport {
    pub fn pass(&self) -> bool {
        self.uniform.pass && self.independent_of_b.pass && self.zero_input.pass && self.conjugate_shortfall.pass
    }
}

/// Honest runs with a random choice bit; collects the hash of the string
/// selected by the other bit.
pub fn privacy_amplification_check<R: Rng + ?Sized>(
    params: &ProtocolParams,
    trials: usize,
    kind: BackendKind,
    rng: &mut R,
) -> Result<PaReport> {
    let lambda = params.lambda;
    if lambda > 16 {
        return Err(Error::Params("output histogram needs lambda ≤ 16".into()));
    }
    let ell = params.ell();
    let mut cells = vec![0u64; 1 << lambda];
    let top = lambda.min(4);
    let mut by_b = vec![vec![0u64; 1 << top]; 2];
    let (mut degenerate, mut short) = (0, 0u64);
    for _ in 0..trials {
        let mut inst = setup_tworound(params, SetupMode::HonestCrs, kind, rng)?;
        let b = rng.random::<bool>() as u8;
        let (m0, m1) = (BitString::random(lambda, rng), BitString::random(lambda, rng));
        let run = run_honest(&mut inst, b, &m0, &m1, rng)?;
        if run.check != Ot2cVerdict::Accept {
            return Err(Error::Config("honest two-round run failed its check".into()));
        }
        let (v0, v1) = selection_strings(&run.sigma_s, &run.ots1nc)?;
        if 5 * v0.len() < ell {
            short += 1;
        }
        let other = if b == 0 { v1 } else { v0 };
        if other.weight() == 0 {
            degenerate += 1;
            continue;
        }
        let s = &run.ots2.as_ref().expect("accepted run").s;
        let f = uhash(s, &other, lambda).to_u64() as usize;
        cells[f] += 1;
        by_b[b as usize][f >> (lambda - top)] += 1;
    }
    Ok(PaReport {
        trials,
        degenerate,
        zero_input: rate_check(degenerate as u64, trials as u64, zero_input_probability(ell))?,
        uniform: chi_square_uniform(&cells)?,
        independent_of_b: chi_square_independence(&by_b)?,
        conjugate_shortfall: rate_check(short, trials as u64, conjugate_tail(ell))?,
    })
}
