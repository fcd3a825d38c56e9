//! Exact scalar traits.
//!
//! Every set statistic in this crate counts distinct values, so the scalar
//! must have exact equality, a total order and a hash consistent with both.
//! Floating point types are therefore not scalars. Ring operations go
//! through the `Checked*` traits from `num-traits`; fixed-width scalars
//! panic on overflow instead of wrapping.

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::Neg;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, FromPrimitive, One, Zero};

const OVERFLOW: &str = "scalar overflow: use an arbitrary-precision scalar for this input";

/// An exact commutative ring element with a total order.
pub trait Scalar:
    Clone
    + Ord
    + Hash
    + Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
{
    fn add_exact(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect(OVERFLOW)
    }

    fn sub_exact(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).expect(OVERFLOW)
    }

    fn mul_exact(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect(OVERFLOW)
    }

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect(OVERFLOW)
    }
}

impl<T> Scalar for T where
    T: Clone
        + Ord
        + Hash
        + Debug
        + Send
        + Sync
        + Zero
        + One
        + Neg<Output = T>
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
{
}

/// A scalar with exact division by nonzero elements.
///
/// Implemented only for fractions: integer types also implement
/// `CheckedDiv`, but truncating division is not field division.
pub trait Field: Scalar + CheckedDiv {
    /// `self / rhs`; panics if `rhs` is zero.
    fn div_exact(&self, rhs: &Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        self.checked_div(rhs).expect(OVERFLOW)
    }

    fn recip_exact(&self) -> Self {
        Self::one().div_exact(self)
    }
}

impl<T> Field for Ratio<T>
where
    T: Clone + Integer,
    Ratio<T>: Scalar + CheckedDiv,
{
}
