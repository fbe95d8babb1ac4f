//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

/// Typed failures surfaced by the library.
///
/// Falsified mathematical identities get their own variant so callers can
/// distinguish "the input is bad" from "a claimed identity failed on this
/// input", which is the interesting outcome for falsification-style tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Matrix or vector dimensions are incompatible with the operation.
    DimensionMismatch { expected: usize, got: usize },
    /// A ray is the zero vector or not primitive.
    BadRay { index: usize, reason: &'static str },
    /// Two maximal cones overlap in more than a common face.
    OverlappingCones { first: usize, second: usize },
    /// The operation needs a complete fan.
    FanNotComplete,
    /// The operation needs a simplicial fan or cone.
    NotSimplicial,
    /// The divisor is not semiample (Cartier data or global generation fails).
    NotSemiample { cone: usize, reason: &'static str },
    /// The divisor polytope is empty, so there are no sections to work with.
    EmptyPolytope,
    /// The polytope does not contain the origin in its interior.
    OriginNotInterior,
    /// The polytope is not reflexive where reflexivity is required.
    NotReflexive,
    /// Points handed to the subdivision routine are not on the boundary.
    PointNotOnBoundary { index: usize },
    /// A cone index or cone does not belong to the expected fan.
    UnknownCone,
    /// An index set has the wrong cardinality for a determinant.
    WrongIndexSetSize { expected: usize, got: usize },
    /// A division that the theory promises to be exact was not.
    InexactDivision(&'static str),
    /// A linear system that the theory promises to be consistent was not.
    InconsistentSystem(&'static str),
    /// The nondegeneracy certificate failed where it is a precondition.
    DegenerateHypersurface(&'static str),
    /// Retry budget exhausted while sampling a nondegenerate polynomial.
    RetryBudgetExhausted { tries: u32 },
    /// The requested value is outside the range supported by the formula.
    OutOfRange(&'static str),
    /// A structural assumption of the product formulas fails on this fan.
    AssumptionViolated(&'static str),
    /// The operation is outside the proven scope (for example, more than
    /// three boundary-type factors in a chiral product).
    Unsupported(&'static str),
    /// Exact root extraction was requested but the polynomial does not split
    /// over the rationals.
    NonSplitPolynomial,
    /// A repeated root where simple roots are required.
    RepeatedRoot,
    /// A mathematical identity the theory asserts was falsified by exact
    /// computation. Carries a human-readable account of the mismatch.
    FalsifiedIdentity(String),
    /// Free-form invalid input description (schema-level problems).
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::BadRay { index, reason } => write!(f, "ray {index}: {reason}"),
            Error::OverlappingCones { first, second } => {
                write!(f, "maximal cones {first} and {second} overlap beyond a common face")
            }
            Error::FanNotComplete => write!(f, "fan is not complete"),
            Error::NotSimplicial => write!(f, "fan or cone is not simplicial"),
            Error::NotSemiample { cone, reason } => {
                write!(f, "divisor is not semiample (cone {cone}: {reason})")
            }
            Error::EmptyPolytope => write!(f, "divisor polytope is empty"),
            Error::OriginNotInterior => write!(f, "origin is not an interior point"),
            Error::NotReflexive => write!(f, "polytope is not reflexive"),
            Error::PointNotOnBoundary { index } => {
                write!(f, "subdivision point {index} is not on the polytope boundary")
            }
            Error::UnknownCone => write!(f, "cone does not belong to the expected fan"),
            Error::WrongIndexSetSize { expected, got } => {
                write!(f, "index set has size {got}, expected {expected}")
            }
            Error::InexactDivision(what) => write!(f, "inexact division in {what}"),
            Error::InconsistentSystem(what) => write!(f, "inconsistent linear system in {what}"),
            Error::DegenerateHypersurface(what) => {
                write!(f, "hypersurface fails the nondegeneracy certificate: {what}")
            }
            Error::RetryBudgetExhausted { tries } => {
                write!(f, "no nondegenerate sample found after {tries} tries")
            }
            Error::OutOfRange(what) => write!(f, "argument out of range: {what}"),
            Error::AssumptionViolated(what) => write!(f, "structural assumption violated: {what}"),
            Error::Unsupported(what) => write!(f, "unsupported case: {what}"),
            Error::NonSplitPolynomial => {
                write!(f, "edge polynomial does not split over the rationals (exact mode)")
            }
            Error::RepeatedRoot => write!(f, "edge polynomial has a repeated root"),
            Error::FalsifiedIdentity(msg) => write!(f, "falsified identity: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}
