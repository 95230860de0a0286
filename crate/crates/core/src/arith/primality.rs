//! Miller–Rabin primality testing.
//!
//! Below 2^64 the witness set {2, 3, ..., 37} (the first twelve primes) makes
//! the test deterministic. Above that, `rounds` random bases are drawn from a
//! ChaCha stream seeded by `n`, so a given input always gets the same answer
//! and a composite survives with probability at most 4^-rounds.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::nat::Nat;

/// Probabilistic rounds used for inputs at or above 2^64.
pub const DEFAULT_PRIMALITY_ROUNDS: u32 = 40;

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Primality with the default round count.
pub fn is_probable_prime<T: Nat>(n: &T) -> bool {
    is_probable_prime_with_rounds(n, DEFAULT_PRIMALITY_ROUNDS)
}

pub fn is_probable_prime_with_rounds<T: Nat>(n: &T, rounds: u32) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => is_probable_prime_big(&n.to_biguint(), rounds),
    }
}

#[inline]
pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn is_probable_prime_big(n: &BigUint, rounds: u32) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one
        .trailing_zeros()
        .expect("n - 1 is nonzero for n >= 2^64");
    let d = &n_minus_one >> s;

    let seed = n.iter_u64_digits().fold(0x9e37_79b9_7f4a_7c15u64, |h, w| {
        h.rotate_left(23) ^ w.wrapping_mul(0xff51_afd7_ed55_8ccd)
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigUint::from(2u32);

    // Base 2 first: it weeds out almost every composite cheaply.
    let bases = std::iter::once(two.clone())
        .chain((1..rounds).map(|_| rng.gen_biguint_range(&two, &n_minus_one)));

    'witness: for a in bases {
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
            if x.is_one() {
                return false;
            }
        }
        return false;
    }
    true
}

/// Trial division up to the square root. Exponential in the bit length; test use only.
#[cfg(test)]
pub(crate) fn is_prime_by_trial_division(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn examples() {
        assert!(is_probable_prime(&5u64));
        assert!(!is_probable_prime(&1u64));
        assert!(!is_probable_prime(&0u64));
        assert!(is_probable_prime(&1_000_003u64));
        assert!(is_prime_by_trial_division(1_000_003));
    }

    #[test]
    fn agrees_with_trial_division_below_100k() {
        for n in 0..100_000u64 {
            assert_eq!(is_prime_u64(n), is_prime_by_trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_to_small_bases_are_rejected() {
        // 3215031751 is a strong pseudoprime to bases 2, 3, 5 and 7.
        // 3825123056546413051 fools every prime base up to 23.
        for n in [3_215_031_751u64, 2_152_302_898_747, 3_825_123_056_546_413_051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest prime below 2^64
        assert!(!is_prime_u64(u64::MAX));
    }

    #[test]
    fn big_inputs() {
        // 2^89 - 1 and 2^127 - 1 are Mersenne primes.
        let m89 = (BigUint::one() << 89u32) - 1u32;
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_probable_prime(&m89));
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&(&m89 * &m127)));
        // Same answer through the u128 instantiation.
        let m89_u128 = u128::from_str("618970019642690137449562111").unwrap();
        assert!(is_probable_prime(&m89_u128));
        // Carmichael number above 2^64: 6000307 * 12000613 * 18000919.
        let carmichael = BigUint::from_str("1296198694153288947529").unwrap();
        assert!(!is_probable_prime(&carmichael));
    }

    #[test]
    fn same_answer_every_call() {
        let n = (BigUint::one() << 107u32) - 1u32;
        let first = is_probable_prime(&n);
        for _ in 0..5 {
            assert_eq!(is_probable_prime(&n), first);
        }
        assert!(first);
    }
}
