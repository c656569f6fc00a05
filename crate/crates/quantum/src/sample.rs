//! Outcome sampling shared by every backend.
//!
//! A uniform draw is consumed only when the outcome is not already
//! determined, so backends that agree on probabilities also agree on
//! the stream position and therefore on every later outcome.

use rand::Rng;

/// Probabilities within this distance of 0 or 1 are treated as exact.
pub const PROB_EPS: f64 = 1e-12;

/// Amplitude magnitude below which entries are dropped from debug dumps.
pub const AMP_EPS: f64 = 1e-12;

/// Comparison tolerance for state-level equalities.
pub const STATE_TOL: f64 = 1e-9;

/// Returns 0 with probability `p0`, else 1.
pub fn sample_bit<R: Rng + ?Sized>(p0: f64, rng: &mut R) -> u8 {
    if p0 >= 1.0 - PROB_EPS {
        0
    } else if p0 <= PROB_EPS {
        1
    } else if rng.random::<f64>() < p0 {
        0
    } else {
        1
    }
}
