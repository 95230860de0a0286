//! Divisor enumeration over a complete factorization.

use crate::nat::Nat;

use super::Factorization;

/// All positive divisors of `f.n()`, strictly increasing.
///
/// Generated by mixed-radix expansion over the exponent vector, then sorted.
pub fn divisors<T: Nat>(f: &Factorization<T>) -> Vec<T> {
    let mut out = vec![T::one()];
    for (p, e) in f.factors() {
        let len = out.len();
        let mut power = T::one();
        for _ in 0..*e {
            power = power * p.clone();
            for i in 0..len {
                out.push(out[i].clone() * power.clone());
            }
        }
    }
    out.sort_unstable();
    out
}

/// `tau(n) = (e1 + 1)(e2 + 1)...(et + 1)`; `2^t` when `n` is squarefree.
pub fn divisor_count<T: Nat>(f: &Factorization<T>) -> T {
    f.factors().iter().fold(T::one(), |acc, (_, e)| {
        // tau(n) <= n, so the product always fits in T.
        acc * T::from_u32(e + 1).expect("exponent + 1 fits in T")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factorize, EffortLimits};

    fn f(n: u64) -> Factorization<u64> {
        factorize(&n, &EffortLimits::default()).unwrap()
    }

    fn scan(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(divisors(&f(5)), vec![1, 5]);
        assert_eq!(divisors(&f(1)), vec![1]);
        assert_eq!(divisors(&f(50)), scan(50));
        assert_eq!(divisors(&f(50)), vec![1, 2, 5, 10, 25, 50]);
        assert_eq!(divisor_count(&f(10)), 4);
        assert_eq!(divisor_count(&f(1)), 1);
        assert_eq!(divisor_count(&f(50)), 6);
    }

    #[test]
    fn squarefree_count_is_power_of_two() {
        // 2 * 3 * 5 * 7 * 11 * 13
        let n = 30_030u64;
        assert!(f(n).is_squarefree());
        assert_eq!(divisor_count(&f(n)), 1 << 6);
    }

    #[test]
    fn matches_scan_and_is_closed_under_complement() {
        for n in 1..=3_000u64 {
            let ds = divisors(&f(n));
            assert_eq!(ds, scan(n), "n = {n}");
            assert_eq!(divisor_count(&f(n)), ds.len() as u64);
            let complements: Vec<u64> = ds.iter().rev().map(|d| n / d).collect();
            assert_eq!(complements, ds);
        }
    }
}
