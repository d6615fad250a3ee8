//! Exact construction and verification of generalized Yang-Baxter
//! solutions coming from braided fusion category data.

pub mod error;
pub mod finder;
pub mod fusion;
pub mod linalg;
pub mod rep;
pub mod scalar;
pub mod verify;

pub use error::{DataError, Error, Result};
pub use linalg::{annihilation_check, direct_sum, kron, ExactMatrix};
pub use scalar::CycloScalar;
