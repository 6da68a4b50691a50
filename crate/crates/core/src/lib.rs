//! Square-tiled surfaces and the Kontsevich–Zorich cocycle over their
//! SL2(Z)-orbits.
//!
//! The crate computes strata, orbits, cylinder decompositions, the action
//! on absolute homology, Lyapunov exponents (numerically) and their sum
//! (exactly), absolute period lattices and torus covers, and searches for
//! surfaces whose spectrum is completely degenerate.

pub mod cover;
pub mod cylinder;
pub mod error;
pub mod homology;
pub mod intmat;
pub mod origami;
pub mod perm;
pub mod search;
pub mod spectrum;

pub use error::{Error, Result};
pub use origami::{parse_origami, Generator, Origami, Stratum};
pub use perm::Permutation;
