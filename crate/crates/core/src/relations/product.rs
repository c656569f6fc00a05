//! Exhaustive check of the approximate-product-relation structure.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::crypto::combin::{binomial, ProductDomain};
use crate::error::Result;

/// Largest `c` the exhaustive check accepts.
pub const MAX_EXHAUSTIVE_C: usize = 8;

pub struct ProductRelationSpec<'a> {
    pub alpha: BigRational,
    pub c: usize,
    pub t: usize,
    /// Declared bound on `|S_ι| / |Y|`.
    pub rho: BigRational,
    /// Membership circuit `(ι, C) ↦ [C ∈ S_ι]` for a fixed instance.
    pub membership: Box<dyn Fn(usize, &[usize]) -> bool + 'a>,
    /// Independent description of each `S_ι`, compared against the circuit.
    pub reference: Option<Box<dyn Fn(usize, &[usize]) -> bool + 'a>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `|S_ι|` exceeds `ρ·|Y|`.
    Sparsity { coordinate: usize, size: usize },
    /// Circuit and reference disagree on a subset.
    Membership { coordinate: usize, subset: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductReport {
    pub y_size: usize,
    pub set_sizes: Vec<usize>,
    pub violations: Vec<Violation>,
}

impl ProductReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_product_structure(spec: &ProductRelationSpec<'_>) -> Result<ProductReport> {
    if spec.c > MAX_EXHAUSTIVE_C {
        return Err(crate::Error::Params(format!("exhaustive mode needs c ≤ {MAX_EXHAUSTIVE_C}")));
    }
    let domain = ProductDomain::new(spec.c, spec.t)?;
    let subsets = domain.all_subsets();
    let y_size = subsets.len();
    let bound = &spec.rho * BigRational::from_integer(BigInt::from(y_size));
    let mut set_sizes = Vec::with_capacity(spec.t);
    let mut violations = Vec::new();
    for iota in 0..spec.t {
        let mut size = 0;
        for s in &subsets {
            let m = (spec.membership)(iota, s);
            size += usize::from(m);
            if let Some(reference) = &spec.reference {
                if reference(iota, s) != m {
                    violations.push(Violation::Membership { coordinate: iota, subset: s.clone() });
                }
            }
        }
        if BigRational::from_integer(BigInt::from(size)) > bound {
            violations.push(Violation::Sparsity { coordinate: iota, size });
        }
        set_sizes.push(size);
    }
    Ok(ProductReport { y_size, set_sizes, violations })
}

/// Largest per-coordinate density `C(a, c/2) / C(c, c/2)` of the agreement
/// relations, where `a = ⌊(1 − 1/120)c⌋` is the most agreement a nonempty
/// coordinate can have.
pub fn agreement_density_bound(c: usize) -> BigRational {
    let a = 119 * c / 120;
    BigRational::new(BigInt::from(binomial(a, c / 2)), BigInt::from(binomial(c, c / 2)))
}

/// `|Y| = C(c, c/2)` as a float, for reporting.
pub fn y_size_f64(c: usize) -> f64 {
    binomial(c, c / 2).to_f64().unwrap_or(f64::INFINITY)
}
