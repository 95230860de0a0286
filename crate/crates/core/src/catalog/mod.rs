//! Arctangent identities as records: rendering, the reference listing,
//! parameter sweeps, and line-delimited JSON catalogs.

mod render;
mod store;

use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{EffortLimits, FactorError};
use crate::oracle::verify_exact;
use crate::solver::{self, ProblemInstance, Solution, SolveError};
use crate::Natural;

pub use render::{render_csv_row, render_identity, RenderStyle, CSV_HEADER};
pub use store::{append_catalog, read_catalog, write_catalog, CatalogError};

/// `arctan(1/x) + arctan(l/y) = arctan(1/k)` for divisor `d` of `n = k^2 + 1`.
///
/// Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityRecord {
    #[serde(with = "json_nat")]
    pub k: Natural,
    #[serde(with = "json_nat")]
    pub l: Natural,
    #[serde(with = "json_nat")]
    pub d: Natural,
    #[serde(with = "json_nat")]
    pub x: Natural,
    #[serde(with = "json_nat")]
    pub y: Natural,
    #[serde(with = "json_nat")]
    pub n: Natural,
    pub verified: bool,
    pub annotations: Vec<String>,
}

impl IdentityRecord {
    /// Record for a solver solution, with `verified` set by the exact verifier.
    pub fn from_solution(inst: &ProblemInstance<Natural>, sol: &Solution<Natural>) -> Self {
        let verified = verify_exact(sol.x(), sol.y(), inst.k(), inst.l()).holds;
        Self {
            k: inst.k().clone(),
            l: inst.l().clone(),
            d: sol.d().clone(),
            x: sol.x().clone(),
            y: sol.y().clone(),
            n: inst.n().clone(),
            verified,
            annotations: Vec::new(),
        }
    }

    pub fn generate(k: &Natural, l: &Natural, d: &Natural) -> Result<Self, SolveError> {
        let inst = solver::make_instance(k.clone(), l.clone())?;
        let sol = solver::solution_for_divisor(&inst, d)?;
        Ok(Self::from_solution(&inst, &sol))
    }

    /// `(k, l, d)` identifies a record within a catalog.
    pub fn key(&self) -> (&Natural, &Natural, &Natural) {
        (&self.k, &self.l, &self.d)
    }

    /// Whether the coordinates are the ones the divisor formula gives for `(k, l, d)`.
    pub fn is_consistent(&self) -> bool {
        match Self::generate(&self.k, &self.l, &self.d) {
            Ok(expected) => expected.x == self.x && expected.y == self.y && expected.n == self.n,
            Err(_) => false,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serialization is infallible")
    }
}

/// Big naturals as bare JSON integer literals, never strings or floats.
mod json_nat {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        serde_json::Number::from_str(&v.to_string())
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let num = serde_json::Number::deserialize(d)?;
        BigUint::from_str(&num.to_string())
            .map_err(|_| serde::de::Error::custom(format!("expected a non-negative integer, got {num}")))
    }
}

/// Annotation attached to the listing entry whose printed `x` was 11.
pub const CORRECTED_X_ANNOTATION: &str = "corrected: x printed as 11; exact value 13";

/// The two symbolic families behind every listing entry, for `d = 1` and `d = k^2 + 1`.
pub const FAMILY_TEMPLATES: [&str; 2] = [
    "arctan(1/(k + l(k^2 + 1))) + arctan(l/(kl + 1)) = arctan(1/k)",
    "arctan(1/(k + l)) + arctan(l/(kl + k^2 + 1)) = arctan(1/k)",
];

/// `(k, l, d)` for the seven concrete listing entries, in listing order.
const LISTING: [(u32, u32, u32); 7] = [
    (1, 1, 1),
    (2, 1, 5),
    (3, 1, 1),
    (3, 1, 2),
    (4, 2, 1),
    (4, 2, 17),
    (6, 1, 1),
];

/// The reference identities, each produced by the solver and checked exactly.
///
/// The `(k, l, d) = (3, 1, 1)` entry was originally printed with `x = 11`,
/// which fails verification; the record carries the true `x = 13` plus
/// [`CORRECTED_X_ANNOTATION`].
pub fn reference_listing() -> Vec<IdentityRecord> {
    LISTING
        .iter()
        .map(|&(k, l, d)| {
            let mut rec = IdentityRecord::generate(&k.into(), &l.into(), &d.into())
                .expect("listing parameters are valid");
            assert!(rec.verified, "listing identity failed exact verification");
            if (k, l, d) == (3, 1, 1) {
                rec.annotations.push(CORRECTED_X_ANNOTATION.to_owned());
            }
            rec
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SweepError {
    #[error("empty range {0}")]
    EmptyRange(&'static str),
    #[error("{0} range must start at 1 or above")]
    ZeroInRange(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepFailure {
    pub k: Natural,
    pub l: Natural,
    pub error: FactorError,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SweepOutcome {
    /// Ascending by `k`, then `l`, then `d`.
    pub records: Vec<IdentityRecord>,
    /// `(k, l)` pairs with `gcd(l, k^2 + 1) > 1`.
    pub skipped_not_coprime: usize,
    /// Instances whose `k^2 + 1` could not be factored within the limits.
    pub failures: Vec<SweepFailure>,
}

enum InstanceOutcome {
    Records(Vec<IdentityRecord>),
    NotCoprime,
    Failed(SweepFailure),
}

fn nat_range(range: &RangeInclusive<Natural>, name: &'static str) -> Result<Vec<Natural>, SweepError> {
    let (lo, hi) = (range.start(), range.end());
    if lo > hi {
        return Err(SweepError::EmptyRange(name));
    }
    if lo.is_zero() {
        return Err(SweepError::ZeroInRange(name));
    }
    let mut out = Vec::new();
    let mut v = lo.clone();
    while &v <= hi {
        out.push(v.clone());
        v += 1u32;
    }
    Ok(out)
}

/// Every solution for every coprime `(k, l)` in the product of the two ranges.
///
/// Instances run in parallel; output order does not depend on scheduling.
pub fn sweep(
    k_range: RangeInclusive<Natural>,
    l_range: RangeInclusive<Natural>,
    limits: &EffortLimits,
) -> Result<SweepOutcome, SweepError> {
    let ks = nat_range(&k_range, "k")?;
    let ls = nat_range(&l_range, "l")?;
    let pairs: Vec<(&Natural, &Natural)> =
        ks.iter().flat_map(|k| ls.iter().map(move |l| (k, l))).collect();

    let per_instance: Vec<InstanceOutcome> = pairs
        .par_iter()
        .map(|&(k, l)| {
            let inst = match solver::make_instance(k.clone(), l.clone()) {
                Ok(inst) => inst,
                Err(SolveError::NotCoprime { .. }) => return InstanceOutcome::NotCoprime,
                Err(e) => unreachable!("ranges are positive and unbounded: {e}"),
            };
            match solver::solve_all(&inst, limits) {
                Ok(set) => InstanceOutcome::Records(
                    set.solutions()
                        .iter()
                        .map(|s| IdentityRecord::from_solution(&inst, s))
                        .collect(),
                ),
                Err(SolveError::Factor(error)) => InstanceOutcome::Failed(SweepFailure {
                    k: k.clone(),
                    l: l.clone(),
                    error,
                }),
                Err(e) => unreachable!("solve_all on a valid big instance: {e}"),
            }
        })
        .collect();

    let mut outcome = SweepOutcome::default();
    for item in per_instance {
        match item {
            InstanceOutcome::Records(r) => outcome.records.extend(r),
            InstanceOutcome::NotCoprime => outcome.skipped_not_coprime += 1,
            InstanceOutcome::Failed(f) => outcome.failures.push(f),
        }
    }
    Ok(outcome)
}

/// Shorthand for `sweep` over `u64` bounds.
pub fn sweep_u64(
    k_range: RangeInclusive<u64>,
    l_range: RangeInclusive<u64>,
    limits: &EffortLimits,
) -> Result<SweepOutcome, SweepError> {
    let conv = |r: RangeInclusive<u64>| Natural::from(*r.start())..=Natural::from(*r.end());
    sweep(conv(k_range), conv(l_range), limits)
}

impl SweepOutcome {
    pub fn all_verified(&self) -> bool {
        self.records.iter().all(|r| r.verified)
    }
}
