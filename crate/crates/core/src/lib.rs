//! Exact computational toolkit for sum–product phenomena over the rationals
//! and prime fields.
//!
//! Set arithmetic is generic over an exact [`Scalar`]; the crate-level
//! aliases fix the usual choice, arbitrary-precision rationals.

pub mod clique;
pub mod energy;
pub mod error;
pub mod extremal;
pub mod fp;
pub mod growth;
pub mod incidence;
pub mod ratio;
pub mod rational;
pub mod report;
pub mod scalar;
pub mod set;
pub mod szt;

mod bitset;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};
pub use set::{affine, diffset, prodset, quotset, sumset, Set};

/// Arbitrary-precision reduced fraction.
pub type Rational = num_rational::BigRational;
/// Canonical finite set of rationals.
pub type ExactSet = Set<Rational>;
/// Fixed-width fractions for inputs known to stay small; both panic on overflow.
pub type Rational64 = num_rational::Ratio<i64>;
pub type Rational128 = num_rational::Ratio<i128>;
/// Finite set of fixed-width fractions.
pub type SmallSet = Set<Rational128>;
