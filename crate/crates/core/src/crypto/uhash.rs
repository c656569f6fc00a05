//! Toeplitz universal hashing over GF(2).

use serde::{Deserialize, Serialize};

use super::prf::prf_bits;
use crate::bits::BitString;

/// Seed from which the Toeplitz diagonal is expanded on demand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UHashKey {
    pub seed: BitString,
}

/// `T·v` for the `rows × |v|` Toeplitz matrix `T[i][j] = diag[i - j + |v| - 1]`.
/// `diag` must hold `rows + |v| - 1` bits.
pub fn toeplitz_apply(diag: &BitString, v: &BitString, rows: usize) -> BitString {
    let cols = v.len();
    if cols == 0 {
        return BitString::zeros(rows);
    }
    assert_eq!(diag.len(), rows + cols - 1, "Toeplitz diagonal length");
    let bits: Vec<u8> = (0..rows)
        .map(|i| (0..cols).fold(0u8, |acc, j| acc ^ (diag.bit(i + cols - 1 - j) & v.bit(j))))
        .collect();
    BitString::from_bits(&bits)
}

/// Hashes `v` to `out_len` bits.
pub fn uhash(key: &UHashKey, v: &BitString, out_len: usize) -> BitString {
    if v.is_empty() {
        return BitString::zeros(out_len);
    }
    let diag = prf_bits(&key.seed.encode(), "uhash", &[], out_len + v.len() - 1);
    toeplitz_apply(&diag, v, out_len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toeplitz_layout() {
        // rows = 2, cols = 3, diag = d0..d3: row 0 = (d2 d1 d0), row 1 = (d3 d2 d1).
        let diag: BitString = "0011".parse().unwrap();
        assert_eq!(toeplitz_apply(&diag, &"100".parse().unwrap(), 2).to_string(), "11");
        assert_eq!(toeplitz_apply(&diag, &"001".parse().unwrap(), 2).to_string(), "00");
        assert_eq!(toeplitz_apply(&diag, &"010".parse().unwrap(), 2).to_string(), "01");
    }
}
