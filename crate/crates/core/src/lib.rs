pub mod basedring;
pub mod char2;
pub mod decomp;
pub mod error;
pub mod exact_linalg;
pub mod groups;
pub mod modrep;
pub mod qcase;
pub mod ssimp;

pub use error::{Error, Result};
