//! Classical primitives: commitments, correlation-intractable hashing,
//! PRG, idealized NIZK and universal hashing.

pub mod ci_hash;
pub mod combin;
pub mod commit;
pub mod group;
pub mod nizk;
pub mod prf;
pub mod prg;
pub mod uhash;

pub use ci_hash::{ci_gen, ci_hash, ci_samp, CiHashKey};
pub use combin::{subset_rank, subset_unrank, ProductDomain};
pub use commit::{commit, encode_list, ext_gen, extract, open_verify, CommitKey, Commitment, ExtractKey, Opening};
pub use group::Group;
pub use nizk::{check_witness, nizk_prove, nizk_sim, nizk_verify, Crs, NizkProof, Statement, Witness};
pub use prg::prg_expand;
pub use uhash::{uhash, UHashKey};
