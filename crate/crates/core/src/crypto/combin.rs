//! Lexicographic ranking of `k`-subsets of `{0, …, c-1}` and of their products.
//!
//! Subsets are sorted index lists. Rank 0 is `{0, 1, …, k-1}`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Pascal table of `C(n, k)` for `n ≤ c`.
#[derive(Debug, Clone)]
pub struct Binomials {
    rows: Vec<Vec<BigUint>>,
}

impl Binomials {
    pub fn new(c: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(c + 1);
        for n in 0..=c {
            let mut row = vec![BigUint::one(); n + 1];
            for k in 1..n {
                row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
            }
            rows.push(row);
        }
        Binomials { rows }
    }

    pub fn get(&self, n: usize, k: usize) -> BigUint {
        if k > n {
            BigUint::zero()
        } else {
            self.rows[n][k].clone()
        }
    }
}

/// `C(n, k)` as an exact integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

fn check_subset(subset: &[usize], c: usize, k: usize) -> Result<()> {
    if subset.len() != k {
        return Err(Error::Length { expected: k, got: subset.len() });
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) || subset.last().is_some_and(|&m| m >= c) {
        return Err(Error::Parse(format!("{subset:?} is not a sorted subset of [0, {c})")));
    }
    Ok(())
}

pub fn subset_rank_with(table: &Binomials, subset: &[usize], c: usize, k: usize) -> Result<BigUint> {
    check_subset(subset, c, k)?;
    let mut rank = BigUint::zero();
    let mut next = 0;
    for (i, &a) in subset.iter().enumerate() {
        for v in next..a {
            rank += table.get(c - 1 - v, k - 1 - i);
        }
        next = a + 1;
    }
    Ok(rank)
}

pub fn subset_unrank_with(table: &Binomials, rank: &BigUint, c: usize, k: usize) -> Result<Vec<usize>> {
    if *rank >= table.get(c, k) {
        return Err(Error::Params(format!("rank {rank} out of range for C({c}, {k})")));
    }
    let mut rest = rank.clone();
    let mut out = Vec::with_capacity(k);
    let mut v = 0;
    for i in 0..k {
        loop {
            let block = table.get(c - 1 - v, k - 1 - i);
            if rest < block {
                break;
            }
            rest -= block;
            v += 1;
        }
        out.push(v);
        v += 1;
    }
    Ok(out)
}

/// Rank of a `k`-subset of `[0, c)` in lexicographic order.
pub fn subset_rank(subset: &[usize], c: usize, k: usize) -> Result<BigUint> {
    subset_rank_with(&Binomials::new(c), subset, c, k)
}

pub fn subset_unrank(rank: &BigUint, c: usize, k: usize) -> Result<Vec<usize>> {
    subset_unrank_with(&Binomials::new(c), rank, c, k)
}

/// The `c/2`-subset domain and its `t`-fold product, ranked with the first
/// coordinate most significant.
#[derive(Debug, Clone)]
pub struct ProductDomain {
    pub c: usize,
    pub t: usize,
    table: Binomials,
    pub y_size: BigUint,
    pub size: BigUint,
}

impl ProductDomain {
    pub fn new(c: usize, t: usize) -> Result<Self> {
        if c == 0 || c % 2 != 0 || t == 0 {
            return Err(Error::Params(format!("need even c > 0 and t > 0, got c = {c}, t = {t}")));
        }
        let table = Binomials::new(c);
        let y_size = table.get(c, c / 2);
        let size = num_traits::pow(y_size.clone(), t);
        Ok(ProductDomain { c, t, table, y_size, size })
    }

    pub fn rank(&self, tuple: &[Vec<usize>]) -> Result<BigUint> {
        if tuple.len() != self.t {
            return Err(Error::Length { expected: self.t, got: tuple.len() });
        }
        let mut acc = BigUint::zero();
        for s in tuple {
            acc = acc * &self.y_size + subset_rank_with(&self.table, s, self.c, self.c / 2)?;
        }
        Ok(acc)
    }

    pub fn unrank(&self, rank: &BigUint) -> Result<Vec<Vec<usize>>> {
        if *rank >= self.size {
            return Err(Error::Params("product rank out of range".into()));
        }
        let mut digits = Vec::with_capacity(self.t);
        let mut rest = rank.clone();
        for _ in 0..self.t {
            digits.push(&rest % &self.y_size);
            rest /= &self.y_size;
        }
        digits
            .iter()
            .rev()
            .map(|d| subset_unrank_with(&self.table, d, self.c, self.c / 2))
            .collect()
    }

    pub fn subset_rank(&self, s: &[usize]) -> Result<BigUint> {
        subset_rank_with(&self.table, s, self.c, self.c / 2)
    }

    /// Every `c/2`-subset in rank order. Only sensible for small `c`.
    pub fn all_subsets(&self) -> Vec<Vec<usize>> {
        let n = self.y_size.to_usize().expect("small domain");
        (0..n).map(|r| subset_unrank_with(&self.table, &BigUint::from(r), self.c, self.c / 2).unwrap()).collect()
    }

    /// Global indices `ι·c + κ` covered by a product element.
    pub fn indices(&self, tuple: &[Vec<usize>]) -> Vec<usize> {
        tuple.iter().enumerate().flat_map(|(i, s)| s.iter().map(move |&k| i * self.c + k)).collect()
    }
}
