//! Randomized invariants over permutations and parameter assignments.

use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use ckq::ck::check_orthogonality;
use ckq::classify::{permutation_isomorphic, Algebra, SearchMode};
use ckq::multiplier::{oracle_multiplier, theorem_multiplier};
use ckq::perm::SigmaPermutation;
use ckq::presentation::{Presentation, SeriesPresentation};
use ckq::scalar::JAssignment;
use ckq::sphere::catalog;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(0x5eed), failure_persistence: None, ..ProptestConfig::default() }
}

fn sigma(n: usize) -> impl Strategy<Value = SigmaPermutation> {
    let all = SigmaPermutation::all(n);
    (0..all.len()).prop_map(move |k| all[k].clone())
}

fn assignment(nvars: usize) -> impl Strategy<Value = JAssignment> {
    let all = JAssignment::all_physical(nvars);
    (0..all.len()).prop_map(move |k| all[k].clone())
}

fn case(ns: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (SigmaPermutation, JAssignment)> {
    ns.prop_flat_map(|n| (sigma(n), assignment(n - 1)))
}

fn series(sig: &SigmaPermutation, a: &JAssignment, order: usize) -> SeriesPresentation {
    Presentation::generate(sig, &theorem_multiplier(sig)).specialize(a).unwrap().to_series(order).unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn theorem_multiplier_never_undefined((sig, a) in case(3..=5)) {
        let p = Presentation::generate(&sig, &theorem_multiplier(&sig));
        prop_assert!(p.specialize(&a).is_ok(), "{sig} at {a}");
    }

    #[test]
    fn commutative_at_v_zero((sig, a) in case(3..=4)) {
        prop_assert!(series(&sig, &a, 0).is_commutative());
    }

    #[test]
    fn d_orthogonal(sig in (5usize..=6).prop_flat_map(sigma)) {
        prop_assert!(check_orthogonality(&sig));
    }

    #[test]
    fn assignment_tokens_round_trip(a in (1usize..=4).prop_flat_map(assignment)) {
        let back = JAssignment::parse(&a.tokens()).unwrap();
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn theorem_dominates_oracle(sig in sigma(5)) {
        prop_assert!(theorem_multiplier(&sig).dominates(&oracle_multiplier(&sig)));
    }

    #[test]
    fn star_involutive_and_compatible((sig, a) in case(3..=4)) {
        let p = series(&sig, &a, 4);
        prop_assert!(p.star_involutive().unwrap());
        prop_assert!(p.star_compatible().unwrap());
    }

    #[test]
    fn no_overlaps_after_contraction((sig, a) in case(3..=4)) {
        let p = series(&sig, &a, 4);
        prop_assert!(p.overlaps().unwrap().is_empty());
    }

    #[test]
    fn json_round_trip((sig, a) in case(3..=4)) {
        let p = series(&sig, &a, 3);
        let back = SeriesPresentation::from_json(&p.to_json()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn isomorphism_reflexive_and_symmetric(i in 0usize..6, k in 0usize..6, slot in 0usize..2) {
        let all = SigmaPermutation::all(3);
        let a = JAssignment::contract_one(2, slot);
        let x = Algebra::vector(&all[i], &a, 4).unwrap();
        let y = Algebra::vector(&all[k], &a, 4).unwrap();
        let id = permutation_isomorphic(&x, &x, SearchMode::STRICT).unwrap();
        prop_assert!(id.is_some_and(|w| w.is_identity()));
        let there = permutation_isomorphic(&x, &y, SearchMode::STRICT).unwrap().is_some();
        let back = permutation_isomorphic(&y, &x, SearchMode::STRICT).unwrap().is_some();
        prop_assert_eq!(there, back);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn sphere_contractions_confluent(i in 0usize..64, slot in 0usize..3) {
        let entries: Vec<_> = catalog().unwrap().iter().filter(|e| e.n == 4).collect();
        let e = entries[i % entries.len()];
        let a = JAssignment::contract_one(3, slot);
        let alg = Algebra::sphere(&e.sigma, &a, 4).unwrap();
        prop_assert!(alg.solved.system.overlaps().unwrap().is_empty());
    }
}
