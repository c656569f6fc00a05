use eprot_quantum::{make_epr, BackendKind, Basis, QState};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::skeleton::fresh_collection;
use super::CollectionLayout;
use crate::bits::BitString;
use crate::crypto::ci_hash::key_len;
use crate::crypto::prf::{prf_bytes, prf_int};
use crate::crypto::{ci_gen, ext_gen, CiHashKey, CommitKey, Crs, ExtractKey, Group, ProductDomain};
use crate::error::{Error, Result};
use crate::relations::ProtocolParams;

/// Bits of shared randomness behind an honest-CRS setup.
pub const SHARED_SEED_BITS: usize = 128;

const EPR_CHUNK: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetupMode {
    /// Keys expanded from a string both parties obtain by measuring EPR pairs.
    HonestCrs,
    /// `ck` from `ext_gen`, with the trapdoor kept by the harness.
    ExtractMode,
    /// `hk` left unset until a simulator programs it.
    ProgrammedHk,
}

impl SetupMode {
    pub fn name(self) -> &'static str {
        match self {
            SetupMode::HonestCrs => "honest-crs",
            SetupMode::ExtractMode => "extract-mode",
            SetupMode::ProgrammedHk => "programmed-hk",
        }
    }
}

/// Everything both parties see.
#[derive(Debug, Clone)]
pub struct PublicSetup {
    pub params: ProtocolParams,
    pub layout: CollectionLayout,
    pub ck: CommitKey,
    pub crs: Crs,
    pub hk: Option<CiHashKey>,
    pub domain: ProductDomain,
}

impl PublicSetup {
    pub fn hk(&self) -> Result<&CiHashKey> {
        self.hk.as_ref().ok_or_else(|| Error::Config("hash key has not been programmed".into()))
    }

    pub fn ell(&self) -> usize {
        self.params.ell()
    }

    pub fn lambda(&self) -> usize {
        self.params.lambda
    }
}

/// A full setup: public keys, the optional extraction trapdoor and the
/// `ℓ` collections shared between sender and receiver.
#[derive(Debug, Clone)]
pub struct Setup {
    pub public: PublicSetup,
    pub ek: Option<ExtractKey>,
    pub collections: Vec<QState>,
    pub mode: SetupMode,
}

/// Both parties measure `n` shared EPR pairs in the standard basis.
pub fn derive_shared_string<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<(BitString, BitString)> {
    let mut sender = Vec::with_capacity(n);
    let mut receiver = Vec::with_capacity(n);
    let mut left = n;
    while left > 0 {
        let k = left.min(EPR_CHUNK);
        let pairs: Vec<(usize, usize)> = (0..k).map(|j| (j, k + j)).collect();
        let mut st = make_epr(2 * k, &pairs, BackendKind::Stabilizer)?;
        for &(a, b) in &pairs {
            sender.push(st.measure_qubit(a, Basis::Standard, rng)?);
            receiver.push(st.measure_qubit(b, Basis::Standard, rng)?);
        }
        left -= k;
    }
    Ok((BitString::from_bits(&sender), BitString::from_bits(&receiver)))
}

pub(crate) fn keys_from_shared(params: &ProtocolParams, group: std::sync::Arc<Group>, domain: &ProductDomain, seed: &[u8]) -> (CommitKey, Crs, CiHashKey) {
    let ck = CommitKey::from_seed(group, params.lambda, seed);
    let crs = Crs(prf_bytes(seed, "crs", &[], 4 * params.lambda));
    let prf_key = prf_bytes(seed, "ci-key", &[], key_len(params.lambda_ci));
    let delta = prf_int(seed, "ci-offset", &[], domain.size.bits() as usize + 64) % &domain.size;
    (ck, crs, CiHashKey { prf_key, delta })
}

pub fn setup<R: Rng + ?Sized>(params: &ProtocolParams, mode: SetupMode, kind: BackendKind, rng: &mut R) -> Result<Setup> {
    params.validate()?;
    let group = Group::standard(params.group_bits)?;
    let domain = ProductDomain::new(params.c, params.t)?;
    let layout = CollectionLayout::new(params.lambda);
    let (ck, ek, crs, hk) = match mode {
        SetupMode::HonestCrs => {
            let (s, r) = derive_shared_string(SHARED_SEED_BITS, rng)?;
            debug_assert_eq!(s, r);
            let (ck, crs, hk) = keys_from_shared(params, group, &domain, &s.to_bytes());
            (ck, None, crs, Some(hk))
        }
        SetupMode::ExtractMode => {
            let (ck, ek) = ext_gen(group, params.lambda, rng);
            let crs = Crs::random(params.lambda, rng);
            let hk = ci_gen(&domain, params.lambda_ci, rng);
            (ck, Some(ek), crs, Some(hk))
        }
        SetupMode::ProgrammedHk => {
            let ck = CommitKey::honest(group, params.lambda, rng);
            let crs = Crs::random(params.lambda, rng);
            (ck, None, crs, None)
        }
    };
    let collections = (0..params.ell()).map(|_| fresh_collection(&layout, kind)).collect::<Result<Vec<_>>>()?;
    Ok(Setup { public: PublicSetup { params: params.clone(), layout, ck, crs, hk, domain }, ek, collections, mode })
}
