//! Exact integer arithmetic: gcd, rationals, primality, factorization, divisors.

mod divisors;
mod factor;
mod primality;

use num_bigint::BigInt;
use num_rational::Ratio;

use crate::nat::Nat;

pub use divisors::{divisor_count, divisors};
pub use factor::{
    factorize, EffortLimits, Exhausted, FactorError, Factorization, InvalidFactorization,
    DEFAULT_MAX_RHO_ITERATIONS, DEFAULT_TIME_BUDGET, DEFAULT_TRIAL_DIVISION_BOUND,
};
pub use primality::{is_probable_prime, is_probable_prime_with_rounds, DEFAULT_PRIMALITY_ROUNDS};

/// Exact rational over signed big integers, always reduced with a positive denominator.
pub type Rational = Ratio<BigInt>;

/// `gcd(0, 0) = 0`.
pub fn gcd<T: Nat>(a: &T, b: &T) -> T {
    a.gcd(b)
}

/// `numerator / denominator` in lowest terms; `None` for a zero denominator.
pub fn rational(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Option<Rational> {
    let den = denominator.into();
    if den == BigInt::from(0) {
        return None;
    }
    Some(Ratio::new(numerator.into(), den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use num_integer::Integer;
    use num_traits::{One, Signed};
    use proptest::prelude::*;

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&12u64, &18), 6);
        assert_eq!(gcd(&1u64, &987_654_321), 1);
        assert_eq!(gcd(&7u64, &50), 1);
        assert_eq!(gcd(&0u64, &0), 0);
        assert_eq!(gcd(&BigUint::from(7u32), &BigUint::from(50u32)), BigUint::one());
    }

    #[test]
    fn rational_reduces() {
        let r = rational(-6, 4).unwrap();
        assert_eq!((r.numer(), r.denom()), (&BigInt::from(-3), &BigInt::from(2)));
        let r = rational(3, -9).unwrap();
        assert_eq!((r.numer(), r.denom()), (&BigInt::from(-1), &BigInt::from(3)));
        assert!(rational(1, 0).is_none());
    }

    proptest! {
        #[test]
        fn gcd_divides_both_and_scales(a in 0u64..1 << 40, b in 0u64..1 << 40, c in 1u64..1 << 20) {
            let g = gcd(&a, &b);
            if g != 0 {
                prop_assert_eq!(a % g, 0);
                prop_assert_eq!(b % g, 0);
            }
            let (ac, bc) = (a as u128 * c as u128, b as u128 * c as u128);
            prop_assert_eq!(gcd(&ac, &bc), c as u128 * g as u128);
        }

        #[test]
        fn rational_is_canonical(n in any::<i64>(), d in any::<i64>().prop_filter("nonzero", |d| *d != 0)) {
            let r = rational(n, d).unwrap();
            prop_assert!(r.denom().is_positive());
            prop_assert!(r.numer().abs().gcd(r.denom()).is_one());
        }
    }
}
