//! Block-structured agreement counting shared by both relations.
//!
//! Index `i` in `[ℓ]` is the pair `(ι, κ) = (i / c, i % c)`.

/// Which indices agree with the reference values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agreement {
    pub agree: Vec<bool>,
    pub c: usize,
    pub t: usize,
}

impl Agreement {
    pub fn new(agree: Vec<bool>, c: usize, t: usize) -> Self {
        assert_eq!(agree.len(), c * t, "agreement vector length");
        Agreement { agree, c, t }
    }

    pub fn total(&self) -> usize {
        self.agree.iter().filter(|&&a| a).count()
    }

    pub fn block(&self, iota: usize) -> &[bool] {
        &self.agree[iota * self.c..(iota + 1) * self.c]
    }

    pub fn block_count(&self, iota: usize) -> usize {
        self.block(iota).iter().filter(|&&a| a).count()
    }

    /// Total agreement is at most `(1 − 1/60)ℓ`.
    pub fn total_ok(&self) -> bool {
        60 * self.total() <= 59 * self.c * self.t
    }

    /// Every block agrees on at least `c/2` indices.
    pub fn blocks_ok(&self) -> bool {
        (0..self.t).all(|i| 2 * self.block_count(i) >= self.c)
    }

    /// `S_ι ≠ ∅` iff `c/2 ≤ agreement ≤ (1 − 1/120)c`.
    pub fn nonempty(&self, iota: usize) -> bool {
        let n = self.block_count(iota);
        2 * n >= self.c && 120 * n <= 119 * self.c
    }

    pub fn nonempty_count(&self) -> usize {
        (0..self.t).filter(|&i| self.nonempty(i)).count()
    }

    /// `C ∈ S_ι`: the block is nonempty and all of `C` agrees.
    pub fn member(&self, iota: usize, subset: &[usize]) -> bool {
        self.nonempty(iota) && subset.iter().all(|&k| self.block(iota)[k])
    }

    /// `y` hits every nonempty coordinate.
    pub fn hits(&self, y: &[Vec<usize>]) -> bool {
        y.len() == self.t && (0..self.t).all(|i| !self.nonempty(i) || self.member(i, &y[i]))
    }

    /// At least a 1/120 fraction of coordinates is nonempty.
    pub fn counting_bound_holds(&self) -> bool {
        120 * self.nonempty_count() >= self.t
    }
}
