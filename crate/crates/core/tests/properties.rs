use std::collections::HashSet;

use arctan_dioph::arith::{self, EffortLimits};
use arctan_dioph::catalog::{self, read_catalog, write_catalog, IdentityRecord};
use arctan_dioph::oracle::{brute_force_solutions, verify_exact, SearchBound};
use arctan_dioph::solver::{make_instance, solve_all, SolveError};
use arctan_dioph::{Nat, Natural};
use num_integer::Integer;
use proptest::prelude::*;

fn coprime_instance() -> impl Strategy<Value = (u64, u64)> {
    (1u64..2_000, 1u64..500).prop_filter("gcd(l, k^2 + 1) = 1", |(k, l)| l.gcd(&(k * k + 1)) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn every_solution_satisfies_the_equation((k, l) in coprime_instance()) {
        let inst = make_instance(k, l).unwrap();
        let set = solve_all(&inst, &EffortLimits::default()).unwrap();
        let n = k * k + 1;
        let tau = (1..=n).filter(|d| n % d == 0).count();
        prop_assert_eq!(set.count(), tau);

        let mut ys = HashSet::new();
        let mut prev_y = 0;
        for s in &set {
            let (x, y) = s.pair();
            prop_assert_eq!(x * y - l, k * (y + x * l));
            prop_assert_eq!(l.gcd(&y), 1);
            prop_assert!(x > k && y > k * l);
            prop_assert_eq!(s.d() * s.v(), n);
            prop_assert_eq!((x - k) * s.d(), l * n);
            prop_assert!(y > prev_y);
            prev_y = y;
            prop_assert!(ys.insert(y));
            prop_assert!(verify_exact(&x, &y, &k, &l).holds);
        }
        // Divisors d and n/d pair up: (y_d - kl)(y_{n/d} - kl) = n.
        let sols = set.solutions();
        for (a, b) in sols.iter().zip(sols.iter().rev()) {
            prop_assert_eq!((a.y() - k * l) * (b.y() - k * l), n);
        }
    }

    #[test]
    fn fixed_width_and_big_agree((k, l) in coprime_instance()) {
        let limits = EffortLimits::default();
        let small = solve_all(&make_instance(k, l).unwrap(), &limits).unwrap().pairs();
        let wide = solve_all(&make_instance(k as u128, l as u128).unwrap(), &limits).unwrap().pairs();
        let big = solve_all(&make_instance(Natural::from(k), Natural::from(l)).unwrap(), &limits)
            .unwrap()
            .pairs();
        let as_big = |v: &[(u64, u64)]| -> Vec<(Natural, Natural)> {
            v.iter().map(|(x, y)| (x.to_biguint(), y.to_biguint())).collect()
        };
        prop_assert_eq!(as_big(&small), big.clone());
        prop_assert_eq!(
            wide.iter().map(|(x, y)| (x.to_biguint(), y.to_biguint())).collect::<Vec<_>>(),
            big
        );
    }

    #[test]
    fn divisors_sorted_and_closed_under_complement(n in 1u64..10_000_000_000) {
        let f = arith::factorize(&n, &EffortLimits::default()).unwrap();
        prop_assert_eq!(f.product(), n);
        let ds = arith::divisors(&f);
        prop_assert!(ds.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(ds.len() as u64, arith::divisor_count(&f));
        let complements: Vec<u64> = ds.iter().rev().map(|d| n / d).collect();
        prop_assert_eq!(complements, ds);
    }

    #[test]
    fn brute_force_is_sound(k in 1u64..40, l in 1u64..40) {
        // No coprimality precondition on the oracle.
        let bound = SearchBound::new(k + l * (k * k + 1), k * l + k * k + 1).unwrap();
        for (x, y) in brute_force_solutions(&k, &l, &bound) {
            prop_assert!(verify_exact(&x, &y, &k, &l).holds);
            prop_assert_eq!(l.gcd(&y), 1);
        }
    }

    #[test]
    fn catalog_round_trip(keys in prop::collection::btree_set((1u32..60, 1u32..12, 0usize..8), 0..40)) {
        let mut records = Vec::new();
        let mut seen = HashSet::new();
        for (k, l, pick) in keys {
            let Ok(inst) = make_instance(Natural::from(k), Natural::from(l)) else { continue };
            let set = solve_all(&inst, &EffortLimits::default()).unwrap();
            let sol = &set.solutions()[pick % set.count()];
            if seen.insert((k, l, sol.d().clone())) {
                records.push(IdentityRecord::from_solution(&inst, sol));
            }
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        prop_assert_eq!(write_catalog(&path, &records).unwrap(), records.len());
        prop_assert_eq!(read_catalog(&path).unwrap(), records);
    }
}

#[test]
fn factorization_reconstructs_every_n_up_to_a_million() {
    let limits = EffortLimits::default();
    for n in 1..=1_000_000u64 {
        let f = arith::factorize(&n, &limits).unwrap();
        assert_eq!(f.product(), n);
        for (p, e) in f.factors() {
            assert!(*e >= 1);
            assert!(arith::is_probable_prime(p), "{p} in factorization of {n}");
        }
    }
}

#[test]
fn sweep_count_matches_independent_divisor_sums() {
    let limits = EffortLimits::default();
    for max_k in [1u64, 5, 10, 40] {
        let expected: usize = (1..=max_k)
            .map(|k| {
                let n = k * k + 1;
                (1..=n).filter(|d| n % d == 0).count()
            })
            .sum();
        let out = catalog::sweep_u64(1..=max_k, 1..=1, &limits).unwrap();
        assert_eq!(out.records.len(), expected, "k <= {max_k}");
        assert!(out.all_verified());
    }
}

#[test]
fn sweep_is_deterministic() {
    let limits = EffortLimits::default();
    let first = catalog::sweep_u64(1..=40, 1..=10, &limits).unwrap();
    for _ in 0..3 {
        assert_eq!(catalog::sweep_u64(1..=40, 1..=10, &limits).unwrap(), first);
    }
}

#[test]
fn perturbations_never_verify() {
    let limits = EffortLimits::default();
    for k in 1..=25u64 {
        for l in 1..=10u64 {
            let inst = match make_instance(k, l) {
                Ok(i) => i,
                Err(SolveError::NotCoprime { .. }) => continue,
                Err(e) => panic!("{e}"),
            };
            for (x, y) in solve_all(&inst, &limits).unwrap().pairs() {
                for (px, py) in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                    if px > 0 && py > 0 {
                        assert!(!verify_exact(&px, &py, &k, &l).holds);
                    }
                }
            }
        }
    }
}
