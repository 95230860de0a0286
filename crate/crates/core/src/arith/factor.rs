//! Complete prime factorization: trial division, then Brent's variant of
//! Pollard rho on whatever composite cofactor is left.

use std::borrow::Cow;
use std::fmt;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primality::{is_prime_u64, is_probable_prime_big, mul_mod_u64};
use super::primality::DEFAULT_PRIMALITY_ROUNDS;
use crate::nat::{self, Nat};

/// Upper bound on the trial-division stage.
pub const DEFAULT_TRIAL_DIVISION_BOUND: u64 = 1_000_000;
pub const DEFAULT_MAX_RHO_ITERATIONS: u64 = 100_000_000;
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(30);

/// Work budget for [`factorize`]. Exhausting either limit yields
/// [`FactorError::Incomplete`] rather than an unbounded search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EffortLimits {
    pub max_rho_iterations: u64,
    pub time_budget: Duration,
    pub trial_division_bound: u64,
    pub primality_rounds: u32,
}

impl Default for EffortLimits {
    fn default() -> Self {
        Self {
            max_rho_iterations: DEFAULT_MAX_RHO_ITERATIONS,
            time_budget: DEFAULT_TIME_BUDGET,
            trial_division_bound: DEFAULT_TRIAL_DIVISION_BOUND,
            primality_rounds: DEFAULT_PRIMALITY_ROUNDS,
        }
    }
}

impl EffortLimits {
    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = budget;
        self
    }

    pub fn with_max_rho_iterations(mut self, iterations: u64) -> Self {
        self.max_rho_iterations = iterations;
        self
    }

    pub fn with_trial_division_bound(mut self, bound: u64) -> Self {
        self.trial_division_bound = bound;
        self
    }
}

/// `n = p1^e1 * ... * pt^et` with `p1 < ... < pt` all prime and every `ei >= 1`.
///
/// `n = 1` is the empty product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factorization<T> {
    n: T,
    factors: Vec<(T, u32)>,
}

impl<T: Nat> Factorization<T> {
    /// Builds a factorization from prime powers, checking every invariant
    /// including primality of each base.
    pub fn from_prime_powers(factors: Vec<(T, u32)>) -> Result<Self, InvalidFactorization> {
        let mut n = T::one();
        for (i, (p, e)) in factors.iter().enumerate() {
            if *e == 0 {
                return Err(InvalidFactorization::ZeroExponent);
            }
            if i > 0 && factors[i - 1].0 >= *p {
                return Err(InvalidFactorization::NotStrictlyIncreasing);
            }
            if !super::is_probable_prime(p) {
                return Err(InvalidFactorization::NotPrime(p.to_biguint()));
            }
            for _ in 0..*e {
                n = nat::mul(&n, p).map_err(|_| InvalidFactorization::Overflow)?;
            }
        }
        Ok(Self { n, factors })
    }

    pub fn n(&self) -> &T {
        &self.n
    }

    pub fn factors(&self) -> &[(T, u32)] {
        &self.factors
    }

    /// Number of distinct primes.
    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    /// Multiplies the prime powers back out.
    pub fn product(&self) -> T {
        self.factors.iter().fold(T::one(), |acc, (p, e)| {
            (0..*e).fold(acc, |acc, _| acc * p.clone())
        })
    }

    pub fn to_big(&self) -> Factorization<BigUint> {
        Factorization {
            n: self.n.to_biguint(),
            factors: self
                .factors
                .iter()
                .map(|(p, e)| (p.to_biguint(), *e))
                .collect(),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Factorization<T> {
    /// `50 = 2 * 5^2`; `1 = 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = ", self.n)?;
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvalidFactorization {
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("primes must be strictly increasing")]
    NotStrictlyIncreasing,
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("product overflows the integer type")]
    Overflow,
}

/// Which effort limit ran out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exhausted {
    Iterations,
    Time,
}

impl fmt::Display for Exhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exhausted::Iterations => f.write_str("rho iteration budget"),
            Exhausted::Time => f.write_str("time budget"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("cannot factor 0")]
    Zero,
    /// The primes found so far and the part of `n` still unfactored.
    #[error("factorization incomplete ({exhausted} exhausted); unfactored cofactor {cofactor}")]
    Incomplete {
        partial: Vec<(BigUint, u32)>,
        cofactor: BigUint,
        exhausted: Exhausted,
    },
}

static SMALL_PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
static TRIAL_PRIMES: OnceLock<Vec<u32>> = OnceLock::new();

const SMALL_SIEVE_LIMIT: u64 = 1 << 16;

fn sieve(limit: u64) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u32);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Primes up to `min(bound, isqrt(n))`, from a cached sieve where possible.
fn trial_primes(bound: u64, n: &BigUint) -> Cow<'static, [u32]> {
    let needed = match n.sqrt().to_u64() {
        Some(root) => root.min(bound),
        None => bound,
    };
    let cached = if needed <= SMALL_SIEVE_LIMIT {
        SMALL_PRIMES.get_or_init(|| sieve(SMALL_SIEVE_LIMIT))
    } else if needed <= DEFAULT_TRIAL_DIVISION_BOUND {
        TRIAL_PRIMES.get_or_init(|| sieve(DEFAULT_TRIAL_DIVISION_BOUND))
    } else {
        return Cow::Owned(sieve(needed));
    };
    let end = cached.partition_point(|&p| u64::from(p) <= needed);
    Cow::Borrowed(&cached[..end])
}

struct Budget {
    iterations_left: u64,
    deadline: Instant,
}

impl Budget {
    fn spend(&mut self, iterations: u64) -> Result<(), Exhausted> {
        if iterations > self.iterations_left {
            self.iterations_left = 0;
            return Err(Exhausted::Iterations);
        }
        self.iterations_left -= iterations;
        if Instant::now() >= self.deadline {
            return Err(Exhausted::Time);
        }
        Ok(())
    }
}

/// Residue arithmetic needed by the rho iteration.
trait RhoRing: Clone + Eq {
    fn from_small(v: u64) -> Self;
    /// `x^2 + c mod n`
    fn step(&self, c: &Self, n: &Self) -> Self;
    fn mul_mod(&self, other: &Self, n: &Self) -> Self;
    fn abs_diff(&self, other: &Self) -> Self;
    fn gcd_with(&self, n: &Self) -> Self;
    fn is_unit(&self) -> bool;
    fn rem_small(&self, p: u64) -> u64;
}

impl RhoRing for u64 {
    fn from_small(v: u64) -> Self {
        v
    }
    fn step(&self, c: &Self, n: &Self) -> Self {
        ((*self as u128 * *self as u128 + *c as u128) % *n as u128) as u64
    }
    fn mul_mod(&self, other: &Self, n: &Self) -> Self {
        mul_mod_u64(*self, *other, *n)
    }
    fn abs_diff(&self, other: &Self) -> Self {
        u64::abs_diff(*self, *other)
    }
    fn gcd_with(&self, n: &Self) -> Self {
        Integer::gcd(self, n)
    }
    fn is_unit(&self) -> bool {
        *self == 1
    }
    fn rem_small(&self, p: u64) -> u64 {
        *self % p
    }
}

impl RhoRing for BigUint {
    fn from_small(v: u64) -> Self {
        BigUint::from(v)
    }
    fn step(&self, c: &Self, n: &Self) -> Self {
        (self * self + c) % n
    }
    fn mul_mod(&self, other: &Self, n: &Self) -> Self {
        (self * other) % n
    }
    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self - other
        } else {
            other - self
        }
    }
    fn gcd_with(&self, n: &Self) -> Self {
        Integer::gcd(self, n)
    }
    fn is_unit(&self) -> bool {
        self.is_one()
    }
    fn rem_small(&self, p: u64) -> u64 {
        (self % p).to_u64().expect("remainder is below p")
    }
}

const RHO_BATCH: u64 = 128;

/// One Brent cycle search with polynomial `x^2 + c`. `Ok(None)` means this `c`
/// found only the trivial divisor `n`; the caller retries with another `c`.
fn brent<R: RhoRing>(n: &R, c: u64, budget: &mut Budget) -> Result<Option<R>, Exhausted> {
    let c = R::from_small(c);
    let mut y = R::from_small(2);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = R::from_small(1);
    let mut g = R::from_small(1);
    let mut r: u64 = 1;

    while g.is_unit() {
        x = y.clone();
        budget.spend(r)?;
        for _ in 0..r {
            y = y.step(&c, n);
        }
        let mut k = 0;
        while k < r && g.is_unit() {
            ys = y.clone();
            let batch = RHO_BATCH.min(r - k);
            budget.spend(batch)?;
            for _ in 0..batch {
                y = y.step(&c, n);
                q = q.mul_mod(&x.abs_diff(&y), n);
            }
            g = q.gcd_with(n);
            k += batch;
        }
        r *= 2;
    }

    if g == *n {
        // The batched product hit 0 mod n; replay the last batch one gcd at a time.
        loop {
            ys = ys.step(&c, n);
            budget.spend(1)?;
            g = x.abs_diff(&ys).gcd_with(n);
            if !g.is_unit() {
                break;
            }
        }
    }
    Ok(if g == *n { None } else { Some(g) })
}

fn find_divisor<R: RhoRing>(n: &R, budget: &mut Budget) -> Result<R, Exhausted> {
    // Rho cycles poorly on tiny factors; they only reach here with a low trial bound.
    for p in [2, 3, 5, 7, 11, 13] {
        if n.rem_small(p) == 0 {
            return Ok(R::from_small(p));
        }
    }
    let mut c = 1;
    loop {
        if let Some(d) = brent(n, c, budget)? {
            return Ok(d);
        }
        c += 1;
    }
}

/// Splits a composite cofactor into primes, all with multiplicity one per entry.
fn split_u64(n: u64, budget: &mut Budget, out: &mut Vec<BigUint>) -> Result<(), (Exhausted, u64)> {
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.push(BigUint::from(m));
            continue;
        }
        match find_divisor(&m, budget) {
            Ok(d) => {
                stack.push(d);
                stack.push(m / d);
            }
            Err(e) => {
                let rest = stack.iter().product::<u64>() * m;
                return Err((e, rest));
            }
        }
    }
    Ok(())
}

fn split_big(
    n: BigUint,
    rounds: u32,
    budget: &mut Budget,
    out: &mut Vec<BigUint>,
) -> Result<(), (Exhausted, BigUint)> {
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if let Some(small) = m.to_u64() {
            if let Err((e, rest)) = split_u64(small, budget, out) {
                let rest = stack.iter().product::<BigUint>() * rest;
                return Err((e, rest));
            }
            continue;
        }
        if is_probable_prime_big(&m, rounds) {
            out.push(m);
            continue;
        }
        match find_divisor(&m, budget) {
            Ok(d) => {
                let cofactor = &m / &d;
                stack.push(d);
                stack.push(cofactor);
            }
            Err(e) => {
                let rest = stack.iter().product::<BigUint>() * m;
                return Err((e, rest));
            }
        }
    }
    Ok(())
}

fn collect_powers(mut primes: Vec<BigUint>) -> Vec<(BigUint, u32)> {
    primes.sort();
    let mut powers: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match powers.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => powers.push((p, 1)),
        }
    }
    powers
}

/// Complete canonical factorization of `n >= 1`.
pub fn factorize<T: Nat>(n: &T, limits: &EffortLimits) -> Result<Factorization<T>, FactorError> {
    if n.is_zero() {
        return Err(FactorError::Zero);
    }
    let mut budget = Budget {
        iterations_left: limits.max_rho_iterations,
        deadline: Instant::now() + limits.time_budget,
    };

    let mut primes: Vec<BigUint> = Vec::new();
    let mut rest = n.to_biguint();

    if let Some(mut small) = rest.to_u64() {
        for &p in trial_primes(limits.trial_division_bound, &rest).iter() {
            let p = u64::from(p);
            if p * p > small {
                break;
            }
            while small % p == 0 {
                small /= p;
                primes.push(BigUint::from(p));
            }
        }
        rest = BigUint::from(small);
    } else {
        for &p in trial_primes(limits.trial_division_bound, &rest).iter() {
            if BigUint::from(p) * p > rest {
                break;
            }
            loop {
                let (quot, rem) = rest.div_rem(&BigUint::from(p));
                if !rem.is_zero() {
                    break;
                }
                rest = quot;
                primes.push(BigUint::from(p));
            }
        }
    }

    if let Err((exhausted, cofactor)) =
        split_big(rest, limits.primality_rounds, &mut budget, &mut primes)
    {
        return Err(FactorError::Incomplete {
            partial: collect_powers(primes),
            cofactor,
            exhausted,
        });
    }

    let factors = collect_powers(primes)
        .into_iter()
        .map(|(p, e)| (nat::narrow(&p).expect("prime factor of n fits in n's type"), e))
        .collect();
    Ok(Factorization {
        n: n.clone(),
        factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn powers(n: u64) -> Vec<(u64, u32)> {
        factorize(&n, &EffortLimits::default())
            .unwrap()
            .factors()
            .to_vec()
    }

    #[test]
    fn examples() {
        assert_eq!(powers(10), vec![(2, 1), (5, 1)]);
        assert_eq!(powers(1), vec![]);
        assert_eq!(powers(50), vec![(2, 1), (5, 2)]);
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(factorize(&0u64, &EffortLimits::default()), Err(FactorError::Zero));
    }

    #[test]
    fn rho_splits_products_of_large_primes() {
        // Both primes exceed the trial-division bound.
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        assert_eq!(powers(p * q), vec![(p, 1), (q, 1)]);
        assert_eq!(powers(p * p), vec![(p, 2)]);
        assert_eq!(powers(2 * 2 * 3 * p * q), vec![(2, 2), (3, 1), (p, 1), (q, 1)]);
    }

    #[test]
    fn big_semiprime() {
        // (2^61 - 1) * 1000000007: cofactor above 2^64 after trial division.
        let m61 = BigUint::from((1u64 << 61) - 1);
        let q = BigUint::from(1_000_000_007u64);
        let n = &m61 * &q;
        let limits = EffortLimits::default().with_trial_division_bound(1000);
        let f = factorize(&n, &limits).unwrap();
        assert_eq!(f.factors(), &[(q, 1), (m61, 1)]);
        assert_eq!(f.product(), n);
    }

    #[test]
    fn k_squared_plus_one_beyond_u64() {
        // k = 10^12: k^2 + 1 = 10^24 + 1 does not fit in u64.
        let k = BigUint::from(1_000_000_000_000u64);
        let n = &k * &k + 1u32;
        let f = factorize(&n, &EffortLimits::default()).unwrap();
        assert_eq!(f.product(), n);
        for (p, _) in f.factors() {
            assert!(super::super::is_probable_prime(p));
        }
    }

    #[test]
    fn exhausted_budget_reports_partial_and_cofactor() {
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let limits = EffortLimits::default().with_max_rho_iterations(1);
        match factorize(&(12 * p * q), &limits) {
            Err(FactorError::Incomplete {
                partial,
                cofactor,
                exhausted,
            }) => {
                assert_eq!(exhausted, Exhausted::Iterations);
                assert_eq!(partial, vec![(BigUint::from(2u32), 2), (BigUint::from(3u32), 1)]);
                assert_eq!(cofactor, BigUint::from(p * q));
            }
            other => panic!("expected Incomplete, got {other:?}"),
        }

        let limits = EffortLimits::default().with_time_budget(Duration::ZERO);
        assert!(matches!(
            factorize(&(p * q), &limits),
            Err(FactorError::Incomplete { exhausted: Exhausted::Time, .. })
        ));
    }

    #[test]
    fn from_prime_powers_validates() {
        assert_eq!(
            Factorization::from_prime_powers(vec![(2u64, 1), (5, 2)]).unwrap().n(),
            &50
        );
        assert_eq!(
            Factorization::from_prime_powers(vec![(5u64, 1), (2, 1)]),
            Err(InvalidFactorization::NotStrictlyIncreasing)
        );
        assert_eq!(
            Factorization::from_prime_powers(vec![(4u64, 1)]),
            Err(InvalidFactorization::NotPrime(BigUint::from(4u32)))
        );
        assert_eq!(
            Factorization::from_prime_powers(vec![(2u64, 0)]),
            Err(InvalidFactorization::ZeroExponent)
        );
    }

    #[test]
    fn display() {
        let f = factorize(&50u64, &EffortLimits::default()).unwrap();
        assert_eq!(f.to_string(), "50 = 2 * 5^2");
        let one = factorize(&BigUint::one(), &EffortLimits::default()).unwrap();
        assert_eq!(one.to_string(), "1 = 1");
        let big = factorize(&BigUint::from_str("1000000000000000000000001").unwrap(), &EffortLimits::default()).unwrap();
        assert!(big.to_string().starts_with("1000000000000000000000001 = "));
    }
}
