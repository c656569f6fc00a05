pub mod bits;
pub mod crypto;
pub mod error;
mod hexser;
pub mod harness;
pub mod oneshot;
pub mod relations;
pub mod tworound;

pub use bits::BitString;
pub use error::{Error, Result};
