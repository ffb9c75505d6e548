//! Integer scalar abstraction shared by the linear algebra.
//!
//! Everything in [`crate::linalg`] is written against [`Scalar`], so the same
//! code runs on `i64` in enumeration loops and on [`BigInt`] where entries may
//! grow without bound (normal forms, powers of `A - I`, conjugators).

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// An exact, signed, Euclidean integer type.
///
/// Fixed-width implementors (`i64`, `i128`) are only safe when the caller
/// knows intermediate values stay in range; arithmetic is not checked here.
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Lossless widening to a big integer.
    fn to_bigint(&self) -> BigInt;

    /// Narrowing from a big integer, `None` when out of range.
    fn from_bigint(v: &BigInt) -> Option<Self>;

    fn of(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 always fits a Scalar")
    }
}

impl Scalar for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
}

impl Scalar for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
}

impl Scalar for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
}

/// Floor division remainder into `[0, |m|)`.
pub(crate) fn rem_nonneg<T: Scalar>(x: &T, m: &T) -> T {
    x.mod_floor(&m.abs())
}
