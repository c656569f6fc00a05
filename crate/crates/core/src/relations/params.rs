use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::crypto::combin::binomial;
use crate::crypto::group::DEFAULT_GROUP_BITS;
use crate::error::{Error, Result};

/// Protocol parameters. `alpha` is kept as an exact rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolParams {
    pub lambda: usize,
    pub lambda_ci: usize,
    #[serde(with = "ratio")]
    pub alpha: BigRational,
    pub c: usize,
    pub t: usize,
    pub group_bits: usize,
}

pub mod ratio {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_ratio(&s).map_err(serde::de::Error::custom)
    }

    pub fn from_ints(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
}

/// Parses `n/d` or an integer.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

fn rat(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn integral(r: &BigRational) -> Option<usize> {
    if r.is_integer() && !r.is_negative() {
        r.to_integer().try_into().ok()
    } else {
        None
    }
}

/// `ρ = C((1−α)c, c/2) / 2^c`.
pub fn sparsity(alpha: &BigRational, c: usize) -> Result<BigRational> {
    if c % 2 != 0 {
        return Err(Error::Params(format!("c = {c} must be even")));
    }
    let top = (BigRational::one() - alpha) * rat(c, 1);
    let n = integral(&top).ok_or_else(|| Error::Params(format!("(1 - alpha)·c = {top} is not a nonnegative integer")))?;
    let num = BigInt::from(binomial(n, c / 2));
    let den = BigInt::from(BigUint::one() << c);
    Ok(BigRational::new(num, den))
}

/// Decimal rendering of a nonnegative rational in scientific notation.
pub fn rational_decimal(r: &BigRational, digits: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let (num, den) = (r.numer().abs(), r.denom().clone());
    let mut exp: i64 = num.to_string().len() as i64 - den.to_string().len() as i64;
    let ten = BigInt::from(10);
    let scaled = |e: i64| -> BigInt {
        let shift = digits as i64 - 1 - e;
        if shift >= 0 {
            (&num * num_traits::pow(ten.clone(), shift as usize)).div_floor(&den)
        } else {
            num.clone().div_floor(&(&den * num_traits::pow(ten.clone(), (-shift) as usize)))
        }
    };
    let mut m = scaled(exp);
    while m.to_string().len() > digits {
        exp += 1;
        m = scaled(exp);
    }
    while m.to_string().len() < digits {
        exp -= 1;
        m = scaled(exp);
    }
    let s = m.to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{}.{}e{exp}", &s[..1], &s[1..])
}

impl ProtocolParams {
    pub fn new(lambda: usize, lambda_ci: usize, alpha: BigRational, c: usize, t: usize) -> Result<Self> {
        let p = ProtocolParams { lambda, lambda_ci, alpha, c, t, group_bits: DEFAULT_GROUP_BITS };
        p.validate()?;
        Ok(p)
    }

    /// One-shot desk configuration: λ = λ_CI = 4, α = 1/8, c = 16, t = 2.
    pub fn desk_oneshot() -> Self {
        ProtocolParams::new(4, 4, rat(1, 8), 16, 2).expect("valid")
    }

    /// Two-round desk configuration: λ = 8, α = 1/8, c = 16, t = 2.
    pub fn desk_tworound() -> Self {
        ProtocolParams::new(8, 8, rat(1, 8), 16, 2).expect("valid")
    }

    /// Smallest useful configuration: c = 4, α = 1/4.
    pub fn tiny(lambda: usize, t: usize) -> Self {
        ProtocolParams::new(lambda, lambda, rat(1, 4), 4, t).expect("valid")
    }

    /// α = 1/120, c = 480, t = 180³·λ_CI.
    pub fn full_scale(lambda: usize, lambda_ci: usize) -> Result<Self> {
        ProtocolParams::new(lambda, lambda_ci, rat(1, 120), 480, 180usize.pow(3) * lambda_ci)
    }

    pub fn with_group_bits(mut self, bits: usize) -> Self {
        self.group_bits = bits;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda == 0 || self.lambda_ci == 0 || self.t == 0 || self.c == 0 {
            return Err(Error::Params("lambda, lambda_ci, c and t must be positive".into()));
        }
        if !self.alpha.is_positive() || self.alpha > BigRational::one() {
            return Err(Error::Params(format!("alpha = {} must lie in (0, 1]", self.alpha)));
        }
        if integral(&(&self.alpha * rat(self.c, 1))).is_none() {
            return Err(Error::Params(format!("alpha·c = {} is not an integer", &self.alpha * rat(self.c, 1))));
        }
        let rho = sparsity(&self.alpha, self.c)?;
        if rho >= self.alpha {
            return Err(Error::Params(format!("sparsity {rho} is not below alpha = {}", self.alpha)));
        }
        if self.lambda > 64 {
            return Err(Error::Params("lambda above 64 is not supported".into()));
        }
        Ok(())
    }

    pub fn ell(&self) -> usize {
        self.c * self.t
    }

    pub fn rho(&self) -> BigRational {
        sparsity(&self.alpha, self.c).expect("validated")
    }

    pub fn message_len(&self) -> usize {
        self.lambda
    }

    pub fn prg_out_len(&self) -> usize {
        2 * self.lambda * self.ell()
    }

    /// `t ≥ λ_CI / (α − ρ)³`, compared exactly.
    pub fn t_bound_holds(&self) -> bool {
        let gap = &self.alpha - self.rho();
        gap.is_positive() && rat(self.t, 1) * &gap * &gap * &gap >= rat(self.lambda_ci, 1)
    }

    pub fn report(&self) -> ParamsReport {
        let rho = self.rho();
        ParamsReport {
            alpha: format!("{}/{}", self.alpha.numer(), self.alpha.denom()),
            c: self.c,
            t: self.t,
            ell: self.ell(),
            rho_fraction: format!("{}/{}", rho.numer(), rho.denom()),
            rho_decimal: rational_decimal(&rho, 12),
            rho_below_alpha: rho < self.alpha,
            t_bound: self.t_bound_holds(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParamsReport {
    pub alpha: String,
    pub c: usize,
    pub t: usize,
    pub ell: usize,
    pub rho_fraction: String,
    pub rho_decimal: String,
    pub rho_below_alpha: bool,
    pub t_bound: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational_decimal(&rat(3003, 65536), 6), "4.58221e-2");
        assert_eq!(rational_decimal(&rat(1, 8), 3), "1.25e-1");
        assert_eq!(rational_decimal(&rat(250, 1), 3), "2.50e2");
        assert_eq!(rational_decimal(&rat(1, 1), 2), "1.0e0");
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ProtocolParams::new(4, 4, rat(1, 8), 15, 2).is_err());
        assert!(ProtocolParams::new(4, 4, rat(1, 120), 16, 2).is_err());
        // α = 1/2 at c = 4: ρ = C(2,2)/16 < 1/2, fine; α = 1/4 at c = 2 is not integral.
        assert!(ProtocolParams::new(4, 4, rat(1, 2), 4, 1).is_ok());
        assert!(ProtocolParams::new(4, 4, rat(1, 4), 2, 1).is_err());
    }

    #[test]
    fn ratio_parsing() {
        assert_eq!(parse_ratio("1/8").unwrap(), rat(1, 8));
        assert_eq!(parse_ratio("2").unwrap(), rat(2, 1));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
    }
}
