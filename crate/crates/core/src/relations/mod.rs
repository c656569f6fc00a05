//! The two sparse relations behind the hash-based cut-and-choose, and the
//! parameter arithmetic that goes with them.

pub mod agreement;
pub mod params;
pub mod product;

pub use agreement::Agreement;
pub use params::{parse_ratio, rational_decimal, sparsity, ParamsReport, ProtocolParams};
pub use product::{agreement_density_bound, verify_product_structure, ProductReport, ProductRelationSpec, Violation};

use crate::bits::BitString;
use crate::crypto::commit::{extract, CommitKey, Commitment, ExtractKey};
use crate::crypto::prg::prg_expand;

/// Extracted one-shot tuple `(v, x, h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extracted {
    pub v: BitString,
    pub x: BitString,
    pub h: u8,
}

/// Splits an extracted `v ‖ x ‖ h`; `None` on a length mismatch.
pub fn parse_tuple(m: &BitString, lambda: usize) -> Option<Extracted> {
    if m.len() != 4 * lambda + 1 {
        return None;
    }
    Some(Extracted {
        v: m.slice(0..2 * lambda),
        x: m.slice(2 * lambda..4 * lambda),
        h: m.bit(4 * lambda),
    })
}

/// `R[ek, s*, {v*_i, h*_i}]`.
#[derive(Debug, Clone)]
pub struct OneShotRelation {
    pub ck: CommitKey,
    pub ek: ExtractKey,
    pub s_star: BitString,
    pub v_star: Vec<BitString>,
    pub h_star: Vec<u8>,
    pub c: usize,
    pub t: usize,
}

impl OneShotRelation {
    pub fn lambda(&self) -> usize {
        self.ck.lambda()
    }

    pub fn extract_all(&self, cms: &[Commitment]) -> Option<Vec<Extracted>> {
        if cms.len() != self.c * self.t {
            return None;
        }
        cms.iter().map(|cm| parse_tuple(&extract(&self.ck, &self.ek, cm)?, self.lambda())).collect()
    }

    fn agreement_of(&self, ext: &[Extracted]) -> Agreement {
        let agree = ext.iter().enumerate().map(|(i, e)| e.v == self.v_star[i] && e.h == self.h_star[i]).collect();
        Agreement::new(agree, self.c, self.t)
    }

    fn prg_matches(&self, ext: &[Extracted]) -> bool {
        let lambda = self.lambda();
        let xs = prg_expand(&self.s_star, 2 * lambda * ext.len());
        ext.iter().enumerate().all(|(i, e)| e.x == xs.slice(2 * lambda * i..2 * lambda * (i + 1)))
    }

    /// Agreement profile, or `None` when some commitment does not extract.
    pub fn agreement(&self, cms: &[Commitment]) -> Option<Agreement> {
        self.extract_all(cms).map(|e| self.agreement_of(&e))
    }

    /// Domain check; returns the agreement profile when `cms` is in it.
    pub fn domain_agreement(&self, cms: &[Commitment]) -> Option<Agreement> {
        let ext = self.extract_all(cms)?;
        if !self.prg_matches(&ext) {
            return None;
        }
        let a = self.agreement_of(&ext);
        (a.total_ok() && a.blocks_ok()).then_some(a)
    }

    pub fn in_domain(&self, cms: &[Commitment]) -> bool {
        self.domain_agreement(cms).is_some()
    }

    /// `y = (C_1, …, C_t)` hits every nonempty `S_ι`. Inputs outside the domain
    /// are never related.
    pub fn in_relation(&self, cms: &[Commitment], y: &[Vec<usize>]) -> bool {
        let Some(a) = self.domain_agreement(cms) else { return false };
        debug_assert!(a.counting_bound_holds(), "fewer than 1/120 nonempty coordinates inside the domain");
        a.hits(y)
    }
}

/// `R[ek, {θ^S_i, v^S_{i,0}, v^S_{i,1}}]`: agreement on the committed triples.
#[derive(Debug, Clone)]
pub struct TwoRoundRelation {
    pub ck: CommitKey,
    pub ek: ExtractKey,
    /// One `(θ, v0, v1)` triple per index.
    pub refs: Vec<[u8; 3]>,
    pub c: usize,
    pub t: usize,
}

impl TwoRoundRelation {
    pub fn extract_all(&self, cms: &[Commitment]) -> Option<Vec<[u8; 3]>> {
        if cms.len() != self.c * self.t {
            return None;
        }
        cms.iter()
            .map(|cm| {
                let m = extract(&self.ck, &self.ek, cm)?;
                (m.len() == 3).then(|| [m.bit(0), m.bit(1), m.bit(2)])
            })
            .collect()
    }

    pub fn agreement(&self, cms: &[Commitment]) -> Option<Agreement> {
        let ext = self.extract_all(cms)?;
        Some(Agreement::new(ext.iter().zip(&self.refs).map(|(a, b)| a == b).collect(), self.c, self.t))
    }

    pub fn domain_agreement(&self, cms: &[Commitment]) -> Option<Agreement> {
        let a = self.agreement(cms)?;
        (a.total_ok() && a.blocks_ok()).then_some(a)
    }

    pub fn in_domain(&self, cms: &[Commitment]) -> bool {
        self.domain_agreement(cms).is_some()
    }

    pub fn in_relation(&self, cms: &[Commitment], y: &[Vec<usize>]) -> bool {
        let Some(a) = self.domain_agreement(cms) else { return false };
        debug_assert!(a.counting_bound_holds(), "fewer than 1/120 nonempty coordinates inside the domain");
        a.hits(y)
    }
}
