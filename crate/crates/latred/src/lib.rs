//! Lattice basis reduction toolkit: classical LLL, LLL with potential-guided
//! deep insertions (PotLLL), blockwise DeepLLL and BKZ, together with exact
//! rational verification oracles and deterministic lattice generators.

pub mod basis;
pub mod error;
pub mod generate;
pub mod hnf;
pub mod rng;
pub mod scalar;
pub mod verify;

pub use basis::{parse_basis, serialize_basis, IntBasis, RationalBasis};
pub use error::{Error, Result};
pub use rng::Prng64;
pub use scalar::{Dd, Fe, Scalar};
