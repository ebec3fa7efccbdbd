//! Exact-arithmetic toolkit for the Markoff equation x² + y² + z² = 3xyz.
//!
//! The crate enumerates Markoff triples and numbers through the Farey-slope
//! parametrization, computes the modular characters (u, v) attached to each
//! slope, builds the associated SL(2,Z) matrices and indefinite quadratic
//! forms, and certifies uniqueness of Markoff numbers that are prime powers
//! or twice prime powers.
//!
//! Every result and comparison is exact big-integer arithmetic; floating
//! point appears only as an internal root-estimate that integer correction
//! steps make exact.

pub mod arith;
pub mod cache;
pub mod character;
pub mod farey;
pub mod form;
pub mod matrix;
pub mod tree;
pub mod unicity;

use num_bigint::BigUint;

pub use arith::PrimePowerClass;
pub use character::Character;
pub use farey::{FareyTriple, Slope, Step};
pub use form::MarkoffForm;
pub use matrix::{MarkoffMatrixRecord, Mat2};
pub use tree::{MarkoffTriple, NumberRecord, SlopedTriple};
pub use unicity::UnicityCertificate;

/// Errors shared across the crate's modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: BigUint, modulus: BigUint },
    #[error("slope 0/0 is undefined")]
    ZeroSlope,
    #[error("cannot parse {0:?} as a slope (expected \"nu/mu\")")]
    BadSlope(String),
    #[error("{r} and {s} are not a Farey pair")]
    NotFareyPair { r: Slope, s: Slope },
    #[error("{0} is a root slope (0/1 or 1/0)")]
    RootSlope(Slope),
    #[error("({x}, {y}, {z}) does not solve the Markoff equation")]
    NotMarkoffTriple { x: BigUint, y: BigUint, z: BigUint },
    #[error("l = {l} is not coprime to m = {m}")]
    NotCoprime { l: BigUint, m: BigUint },
    #[error("modulus {0} exceeds the brute-force cutoff and is not a prime power or twice a prime power")]
    UnsupportedModulus(BigUint),
    #[error("discriminant is {found}, expected {expected}")]
    DiscriminantMismatch {
        found: num_bigint::BigInt,
        expected: num_bigint::BigInt,
    },
    #[error("certificate violation at m = {m}: {reason}")]
    CertificateViolation { m: BigUint, reason: String },
    #[error("matrix has a zero lower-left entry")]
    ZeroDenominator,
}

pub type Result<T> = std::result::Result<T, Error>;
