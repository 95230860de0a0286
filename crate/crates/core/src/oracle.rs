//! Independent checks on the solver: an exact tangent-sum verifier and a
//! brute-force search over the polynomial form `y (x - k) = l (1 + k x)`.
//!
//! Nothing here goes through divisors of `k^2 + 1`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{self, EffortLimits, Rational};
use crate::nat::{self, Nat};
use crate::solver::{self, ProblemInstance, SolveError};

/// Inclusive search box `1 <= x <= max_x`, `1 <= y <= max_y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBound<T> {
    max_x: T,
    max_y: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("search bounds must be at least 1")]
pub struct EmptyBound;

impl<T: Nat> SearchBound<T> {
    pub fn new(max_x: T, max_y: T) -> Result<Self, EmptyBound> {
        if max_x.is_zero() || max_y.is_zero() {
            return Err(EmptyBound);
        }
        Ok(Self { max_x, max_y })
    }

    /// The largest coordinates any solution of `inst` can have:
    /// `x <= k + l (k^2 + 1)` and `y <= k l + k^2 + 1`.
    pub fn extremal(inst: &ProblemInstance<T>) -> Result<Self, nat::Overflow> {
        let max_x = nat::add(inst.k(), &nat::mul(inst.l(), inst.n())?)?;
        let max_y = nat::add(&nat::mul(inst.k(), inst.l())?, inst.n())?;
        Ok(Self { max_x, max_y })
    }

    pub fn max_x(&self) -> &T {
        &self.max_x
    }

    pub fn max_y(&self) -> &T {
        &self.max_y
    }
}

/// Why a candidate failed [`verify_exact`]. Domain failures are reported
/// before the tangent comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureReason {
    /// Some argument is 0.
    ZeroArgument,
    /// `l / y >= 1`, so `arctan(l / y)` is not below `pi / 4`.
    SecondTermNotAcute,
    /// `x y <= l`: the tangent-sum denominator is not positive.
    SumNotAcute,
    /// Both sides are in range but `(y + l x) / (x y - l) != 1 / k`.
    TangentMismatch,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::ZeroArgument => "zero-argument",
            FailureReason::SecondTermNotAcute => "second-term-not-acute",
            FailureReason::SumNotAcute => "sum-not-acute",
            FailureReason::TangentMismatch => "tangent-mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub holds: bool,
    /// `tan(arctan(1/x) + arctan(l/y)) = (y + l x) / (x y - l)`; `None` when `x y = l`
    /// or an argument is 0.
    pub lhs_tangent: Option<Rational>,
    /// `1 / k`; `None` when `k = 0`.
    pub rhs_tangent: Option<Rational>,
    pub domain_ok: bool,
    pub failure_reason: Option<FailureReason>,
}

/// Decides `arctan(1/x) + arctan(l/y) = arctan(1/k)` in exact rational arithmetic.
///
/// Both angles on the left lie in `(0, pi/2)`; with `l / y < 1` and
/// `x y > l` their sum is in `(0, pi/2)` as well, where tangent is injective,
/// so equality of tangents decides equality of angles. `k = 1` is the
/// boundary case `arctan(1) = pi/4`.
pub fn verify_exact<T: Nat>(x: &T, y: &T, k: &T, l: &T) -> VerificationReport {
    let [x, y, k, l] = [x, y, k, l].map(|v| BigInt::from(v.to_biguint()));

    let rhs_tangent = arith::rational(BigInt::one(), k.clone());
    if x.is_zero() || y.is_zero() || k.is_zero() || l.is_zero() {
        return VerificationReport {
            holds: false,
            lhs_tangent: None,
            rhs_tangent,
            domain_ok: false,
            failure_reason: Some(FailureReason::ZeroArgument),
        };
    }

    let denominator = &x * &y - &l;
    let lhs_tangent = arith::rational(&y + &l * &x, denominator.clone());

    let failure = if y <= l {
        Some(FailureReason::SecondTermNotAcute)
    } else if denominator <= BigInt::zero() {
        Some(FailureReason::SumNotAcute)
    } else if lhs_tangent != rhs_tangent {
        Some(FailureReason::TangentMismatch)
    } else {
        None
    };
    let domain_ok = !matches!(
        failure,
        Some(FailureReason::SecondTermNotAcute | FailureReason::SumNotAcute)
    );

    VerificationReport {
        holds: failure.is_none(),
        lhs_tangent,
        rhs_tangent,
        domain_ok,
        failure_reason: failure,
    }
}

fn search(k: &BigUint, l: &BigUint, max_x: &BigUint, max_y: &BigUint, coprime_only: bool) -> Vec<(BigUint, BigUint)> {
    let mut found = Vec::new();
    // y (x - k) = l (1 + k x) has no positive y unless x > k.
    let mut x = k + 1u32;
    while &x <= max_x {
        let rhs = l * (k * &x + 1u32);
        let (y, rem) = rhs.div_rem(&(&x - k));
        if rem.is_zero()
            && !y.is_zero()
            && &y <= max_y
            && &x * &y > *l
            && (!coprime_only || l.gcd(&y).is_one())
        {
            found.push((x.clone(), y));
        }
        x += 1u32;
    }
    found.sort_by(|a, b| a.1.cmp(&b.1));
    found
}

fn narrow_pairs<T: Nat>(pairs: Vec<(BigUint, BigUint)>) -> Vec<(T, T)> {
    pairs
        .into_iter()
        .map(|(x, y)| {
            (
                nat::narrow(&x).expect("x <= max_x"),
                nat::narrow(&y).expect("y <= max_y"),
            )
        })
        .collect()
}

/// Every `(x, y)` in the box with `x y - l = k (y + x l)`, `x y > l` and
/// `gcd(l, y) = 1`, ascending by `y`.
pub fn brute_force_solutions<T: Nat>(k: &T, l: &T, bound: &SearchBound<T>) -> Vec<(T, T)> {
    narrow_pairs(search(
        &k.to_biguint(),
        &l.to_biguint(),
        &bound.max_x.to_biguint(),
        &bound.max_y.to_biguint(),
        true,
    ))
}

/// As [`brute_force_solutions`] but without the `gcd(l, y) = 1` filter. Pairs
/// sharing a factor with `l` are outside the coprime problem the solver answers.
pub fn brute_force_solutions_unfiltered<T: Nat>(
    k: &T,
    l: &T,
    bound: &SearchBound<T>,
) -> Vec<(T, T)> {
    narrow_pairs(search(
        &k.to_biguint(),
        &l.to_biguint(),
        &bound.max_x.to_biguint(),
        &bound.max_y.to_biguint(),
        false,
    ))
}

/// Solver output clipped to a bound, next to the brute-force result for the same bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison<T> {
    pub solver: Vec<(T, T)>,
    pub oracle: Vec<(T, T)>,
}

impl<T: Nat> Comparison<T> {
    pub fn agree(&self) -> bool {
        self.solver == self.oracle
    }
}

pub fn compare<T: Nat>(
    inst: &ProblemInstance<T>,
    bound: &SearchBound<T>,
    limits: &EffortLimits,
) -> Result<Comparison<T>, SolveError> {
    let solver = solver::solve_all(inst, limits)?
        .pairs()
        .into_iter()
        .filter(|(x, y)| x <= &bound.max_x && y <= &bound.max_y)
        .collect();
    let oracle = brute_force_solutions(inst.k(), inst.l(), bound);
    Ok(Comparison { solver, oracle })
}

/// `solve_all` and the brute-force search agree over the extremal box.
pub fn cross_check<T: Nat>(inst: &ProblemInstance<T>, limits: &EffortLimits) -> Result<bool, SolveError> {
    let bound = SearchBound::extremal(inst)?;
    Ok(compare(inst, &bound, limits)?.agree())
}
