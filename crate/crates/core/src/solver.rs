//! Complete solution sets of `arctan(1/x) + arctan(l/y) = arctan(1/k)`.
//!
//! With `gcd(l, k^2 + 1) = 1`, the positive solutions with `gcd(l, y) = 1`
//! correspond one-to-one with the positive divisors `d` of `k^2 + 1`:
//!
//! ```text
//! x = k + l * (k^2 + 1) / d        y = k * l + d
//! ```

use num_bigint::BigUint;

use crate::arith::{self, EffortLimits, FactorError};
use crate::nat::{self, Nat, Overflow};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("k must be a positive integer")]
    InvalidK,
    #[error("l must be a positive integer")]
    InvalidL,
    #[error("l and k^2 + 1 are not coprime (gcd = {gcd})")]
    NotCoprime { gcd: BigUint },
    #[error("{d} does not divide {n}")]
    NotADivisor { d: BigUint, n: BigUint },
    #[error("k^2 + 1 = {n} is not prime")]
    NotPrimeCase { n: BigUint },
    #[error("k^2 + 1 = {n} is not a product of two distinct primes")]
    NotSemiprimeCase { n: BigUint },
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

/// A validated `(k, l)` pair: both positive and `gcd(l, k^2 + 1) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProblemInstance<T> {
    k: T,
    l: T,
    n: T,
}

impl<T: Nat> ProblemInstance<T> {
    pub fn new(k: T, l: T) -> Result<Self, SolveError> {
        if k.is_zero() {
            return Err(SolveError::InvalidK);
        }
        if l.is_zero() {
            return Err(SolveError::InvalidL);
        }
        let n = nat::add(&nat::mul(&k, &k)?, &T::one())?;
        let g = arith::gcd(&l, &n);
        if !g.is_one() {
            return Err(SolveError::NotCoprime {
                gcd: g.to_biguint(),
            });
        }
        Ok(Self { k, l, n })
    }

    pub fn k(&self) -> &T {
        &self.k
    }

    pub fn l(&self) -> &T {
        &self.l
    }

    /// `k^2 + 1`
    pub fn n(&self) -> &T {
        &self.n
    }
}

pub fn make_instance<T: Nat>(k: T, l: T) -> Result<ProblemInstance<T>, SolveError> {
    ProblemInstance::new(k, l)
}

/// The solution attached to divisor `d` of `n = k^2 + 1`, with cofactor `v = n / d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution<T> {
    d: T,
    v: T,
    x: T,
    y: T,
}

impl<T: Nat> Solution<T> {
    pub fn d(&self) -> &T {
        &self.d
    }

    pub fn v(&self) -> &T {
        &self.v
    }

    pub fn x(&self) -> &T {
        &self.x
    }

    pub fn y(&self) -> &T {
        &self.y
    }

    pub fn pair(&self) -> (T, T) {
        (self.x.clone(), self.y.clone())
    }
}

/// All solutions of one instance, ascending by `d` (equivalently by `y`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet<T> {
    instance: ProblemInstance<T>,
    solutions: Vec<Solution<T>>,
}

impl<T: Nat> SolutionSet<T> {
    pub fn instance(&self) -> &ProblemInstance<T> {
        &self.instance
    }

    pub fn solutions(&self) -> &[Solution<T>] {
        &self.solutions
    }

    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    pub fn pairs(&self) -> Vec<(T, T)> {
        self.solutions.iter().map(Solution::pair).collect()
    }
}

impl<'a, T> IntoIterator for &'a SolutionSet<T> {
    type Item = &'a Solution<T>;
    type IntoIter = std::slice::Iter<'a, Solution<T>>;

    fn into_iter(self) -> Self::IntoIter {
        self.solutions.iter()
    }
}

/// Builds `(x, y)` from `d` and `v = n / d` without any divisibility check.
fn assemble<T: Nat>(inst: &ProblemInstance<T>, d: T, v: T) -> Result<Solution<T>, SolveError> {
    let x = nat::add(&inst.k, &nat::mul(&inst.l, &v)?)?;
    let y = nat::add(&nat::mul(&inst.k, &inst.l)?, &d)?;
    // A prime dividing l and y would divide d, hence k^2 + 1.
    assert!(
        arith::gcd(&inst.l, &y).is_one(),
        "gcd(l, y) = 1 must follow from gcd(l, k^2 + 1) = 1"
    );
    Ok(Solution { d, v, x, y })
}

pub fn solution_for_divisor<T: Nat>(
    inst: &ProblemInstance<T>,
    d: &T,
) -> Result<Solution<T>, SolveError> {
    if d.is_zero() || !inst.n.is_multiple_of(d) {
        return Err(SolveError::NotADivisor {
            d: d.to_biguint(),
            n: inst.n.to_biguint(),
        });
    }
    let v = inst.n.clone() / d.clone();
    assemble(inst, d.clone(), v)
}

/// Factors `k^2 + 1` and maps every divisor through [`solution_for_divisor`].
pub fn solve_all<T: Nat>(
    inst: &ProblemInstance<T>,
    limits: &EffortLimits,
) -> Result<SolutionSet<T>, SolveError> {
    let factorization = arith::factorize(&inst.n, limits)?;
    let solutions = arith::divisors(&factorization)
        .iter()
        .map(|d| solution_for_divisor(inst, d))
        .collect::<Result<Vec<_>, _>>()?;
    debug_assert_eq!(
        T::from_usize(solutions.len()),
        Some(arith::divisor_count(&factorization))
    );
    Ok(SolutionSet {
        instance: inst.clone(),
        solutions,
    })
}

/// `k^2 + 1 = p` prime: exactly `(k + l p, k l + 1)` and `(k + l, k l + p)`.
pub fn prime_case_solutions<T: Nat>(
    inst: &ProblemInstance<T>,
    limits: &EffortLimits,
) -> Result<SolutionSet<T>, SolveError> {
    let n = inst.n.clone();
    if !arith::is_probable_prime_with_rounds(&n, limits.primality_rounds) {
        return Err(SolveError::NotPrimeCase { n: n.to_biguint() });
    }
    let solutions = vec![
        assemble(inst, T::one(), n.clone())?,
        assemble(inst, n, T::one())?,
    ];
    Ok(SolutionSet {
        instance: inst.clone(),
        solutions,
    })
}

/// `k^2 + 1 = p1 p2` with `p1 < p2` prime: the four solutions for `d` in `{1, p1, p2, p1 p2}`.
pub fn semiprime_case_solutions<T: Nat>(
    inst: &ProblemInstance<T>,
    limits: &EffortLimits,
) -> Result<SolutionSet<T>, SolveError> {
    let n = inst.n.clone();
    let factorization = arith::factorize(&n, limits)?;
    let (p1, p2) = match factorization.factors() {
        [(p1, 1), (p2, 1)] => (p1.clone(), p2.clone()),
        _ => return Err(SolveError::NotSemiprimeCase { n: n.to_biguint() }),
    };
    let solutions = vec![
        assemble(inst, T::one(), n.clone())?,
        assemble(inst, p1.clone(), p2.clone())?,
        assemble(inst, p2, p1)?,
        assemble(inst, n, T::one())?,
    ];
    Ok(SolutionSet {
        instance: inst.clone(),
        solutions,
    })
}
