//! The unsigned integer abstraction every algorithm in this crate is written against.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, FromPrimitive, ToPrimitive, Unsigned};

/// An exact non-negative integer.
///
/// Implemented for the fixed-width unsigned primitives and for [`BigUint`].
/// Fixed-width instantiations never wrap: operations that could leave the
/// representable range go through the checked helpers below and surface an
/// overflow error to the caller. `BigUint` never overflows.
pub trait Nat:
    Integer
    + Unsigned
    + Clone
    + Hash
    + Debug
    + Display
    + FromStr
    + CheckedAdd
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn to_biguint(&self) -> BigUint;

    /// Narrows an arbitrary-precision value, `None` when it does not fit.
    fn from_biguint(n: &BigUint) -> Option<Self>;
}

macro_rules! impl_nat_prim {
    ($($t:ty),*) => {$(
        impl Nat for $t {
            #[inline]
            fn to_biguint(&self) -> BigUint {
                BigUint::from(*self)
            }

            #[inline]
            fn from_biguint(n: &BigUint) -> Option<Self> {
                <$t>::try_from(n).ok()
            }
        }
    )*};
}

impl_nat_prim!(u32, u64, u128);

impl Nat for BigUint {
    #[inline]
    fn to_biguint(&self) -> BigUint {
        self.clone()
    }

    #[inline]
    fn from_biguint(n: &BigUint) -> Option<Self> {
        Some(n.clone())
    }
}

/// Raised when a fixed-width instantiation cannot hold an intermediate value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("arithmetic overflow in fixed-width integer type")]
pub struct Overflow;

pub(crate) fn add<T: Nat>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_add(b).ok_or(Overflow)
}

pub(crate) fn mul<T: Nat>(a: &T, b: &T) -> Result<T, Overflow> {
    a.checked_mul(b).ok_or(Overflow)
}

pub(crate) fn narrow<T: Nat>(n: &BigUint) -> Result<T, Overflow> {
    T::from_biguint(n).ok_or(Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrowing_rejects_out_of_range() {
        let big = BigUint::from(u64::MAX) + 1u32;
        assert_eq!(u64::from_biguint(&big), None);
        assert_eq!(u128::from_biguint(&big), Some(u64::MAX as u128 + 1));
        assert_eq!(BigUint::from_biguint(&big), Some(big));
    }

    #[test]
    fn checked_helpers() {
        assert_eq!(mul(&u32::MAX, &2u32), Err(Overflow));
        assert_eq!(add(&3u32, &4u32), Ok(7));
        assert_eq!(narrow::<u32>(&BigUint::from(1u64 << 40)), Err(Overflow));
    }
}
