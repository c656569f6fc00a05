use super::prf::prf_bits;
use crate::bits::BitString;

/// Expands a seed to `out_len` bits. Outputs for different lengths share prefixes.
pub fn prg_expand(seed: &BitString, out_len: usize) -> BitString {
    prf_bits(&seed.encode(), "prg", &[], out_len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_consistent_and_deterministic() {
        let s: BitString = "1011".parse().unwrap();
        let long = prg_expand(&s, 300);
        assert_eq!(prg_expand(&s, 17), long.slice(0..17));
        assert_eq!(prg_expand(&s, 300), long);
        assert_ne!(prg_expand(&"1010".parse().unwrap(), 300), long);
    }
}
