//! Exact solutions of `arctan(1/x) + arctan(l/y) = arctan(1/k)` over the positive integers.
//!
//! For `gcd(l, k^2 + 1) = 1`, the solutions with `gcd(l, y) = 1` are exactly
//! `x = k + l (k^2 + 1) / d`, `y = k l + d` for the positive divisors `d` of
//! `k^2 + 1`. [`solver`] builds them, [`oracle`] checks them independently in
//! exact arithmetic, and [`catalog`] turns them into identity records.
//!
//! The algorithms are generic over [`Nat`]; the aliases below fix the
//! arbitrary-precision instantiation used by the catalog and the CLI.

pub mod arith;
pub mod catalog;
pub mod cli;
pub mod nat;
pub mod oracle;
pub mod solver;

pub use nat::Nat;

/// Arbitrary-precision natural number.
pub type Natural = num_bigint::BigUint;
pub use arith::Rational;

pub type Factorization = arith::Factorization<Natural>;
pub type ProblemInstance = solver::ProblemInstance<Natural>;
pub type Solution = solver::Solution<Natural>;
pub type SolutionSet = solver::SolutionSet<Natural>;
pub type SearchBound = oracle::SearchBound<Natural>;

pub use arith::EffortLimits;
pub use catalog::IdentityRecord;
