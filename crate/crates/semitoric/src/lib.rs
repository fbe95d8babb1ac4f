//! Exact computations around hypersurfaces in complete simplicial toric
//! varieties: fans, lattice polytopes, semiample contractions, Cox rings
//! graded by the Chow group, toric residues, Hodge diamonds with their cup
//! product, Picard decompositions, and the Batyrev mirror correspondence.
//!
//! Everything is carried out over arbitrary-precision integers and rationals;
//! the only places floating point can appear are explicitly opt-in numeric
//! root-finding modes. The crate is `no_std` (with `alloc`) so the math core
//! can be embedded anywhere; IO and file formats live in the companion CLI
//! crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod cohomology;
pub mod cox;
pub mod error;
pub mod linalg;
pub mod mirror;
pub mod polytope;
pub mod residue;

pub use error::Error;

/// The library version, embedded in every CLI report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Arbitrary-precision integer used throughout the crate.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Shorthand for `Int::from(n)`.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Shorthand for the rational `n/1`.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}
