use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use polychain::chain::{linear_chain, zigzag_chain, LinkVector};
use polychain::dp::{self, classify, ClassifierCase, Engine};
use polychain::index::{ti_direct, IndexFunction};
use polychain::oracle::exhaustive;
use polychain::{Link, Value};
use proptest::prelude::*;

/// Small numerators make ties, and so multi-chain optima, common.
fn rational_index() -> impl Strategy<Value = IndexFunction> {
    prop::array::uniform6((-6i64..=6, 1i64..=3)).prop_map(|pairs| {
        let values = pairs.map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)));
        IndexFunction::rational("random", values)
    })
}

fn float_index() -> impl Strategy<Value = IndexFunction> {
    prop::array::uniform6(-10.0f64..10.0).prop_map(|v| IndexFunction::float("random-float", v, 1e-9))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn program_matches_exhaustive_search(f in rational_index(), n in 3usize..=11) {
        let truth = exhaustive(&f, n).unwrap();
        let table = dp::run_dp(&f, n).unwrap();
        prop_assert!(table.check_invariants());

        let best = Engine::new(&f).maximize(n, None).unwrap();
        prop_assert!(best.value.tie(&truth.max_value));
        let chains: Vec<LinkVector> = table.optimal_chains(None).collect();
        prop_assert_eq!(&chains, &truth.argmax);
        prop_assert_eq!(best.labeled_count, BigUint::from(truth.argmax.len()));

        for end in Link::ALL {
            prop_assert!(table.value(n, end).tie(&truth.end_max[end.slot()]));
            let per_end: Vec<LinkVector> = table.optimal_chains(Some(end)).collect();
            prop_assert_eq!(&per_end, &truth.end_argmax[end.slot()]);
            prop_assert_eq!(table.count(n, end), BigUint::from(per_end.len()));
        }

        let low = dp::minimize(&f, n).unwrap();
        prop_assert!(low.value.tie(&truth.min_value));
    }

    #[test]
    fn witness_and_prefixes_attain_table_values(f in rational_index(), n in 3usize..=14) {
        let table = dp::run_dp(&f, n).unwrap();
        let best = dp::maximize(&f, n, None).unwrap();
        prop_assert!(ti_direct(&best.witness, &f).tie(&best.value));
        for chain in table.optimal_chains(None).take(64) {
            for j in 3..=n {
                let prefix = chain.prefix(j);
                let end = prefix.last().unwrap();
                prop_assert!(ti_direct(&prefix, &f).tie(&table.value(j, end)), "prefix {} of ({})", j, chain);
            }
        }
    }

    #[test]
    fn minimum_is_negated_maximum(f in rational_index(), n in 3usize..=40) {
        let low = dp::minimize(&f, n).unwrap();
        let high = dp::maximize(&f.negate(), n, None).unwrap();
        prop_assert!(low.value.tie(&high.value.neg()));
        prop_assert_eq!(low.labeled_count, high.labeled_count);
        prop_assert!(ti_direct(&low.witness, &f).tie(&low.value));
    }

    #[test]
    fn float_program_within_tolerance(f in float_index(), n in 3usize..=10) {
        let truth = exhaustive(&f, n).unwrap();
        let best = dp::maximize(&f, n, None).unwrap();
        prop_assert!(best.value.tie(&truth.max_value));
        prop_assert!(best.tolerance_dependent);
        prop_assert!(ti_direct(&best.witness, &f).tie(&best.value));
    }

    #[test]
    fn enumeration_is_sorted_and_distinct(f in rational_index(), n in 3usize..=16) {
        let chains: Vec<LinkVector> = dp::run_dp(&f, n).unwrap().optimal_chains(None).take(500).collect();
        prop_assert!(!chains.is_empty());
        prop_assert!(chains.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn classifier_agrees_with_program(f in rational_index()) {
        let verdict = classify(&f).unwrap();
        let engine = Engine::new(&f);
        let table = engine.run(60).unwrap();
        let maximal = |n: usize| -> Vec<LinkVector> { table.optimal_chains_at(n, None).take(3).collect() };
        match verdict.case {
            ClassifierCase::LinearAlways => {
                for n in 3..=60 {
                    prop_assert_eq!(maximal(n), vec![linear_chain(n).unwrap()]);
                }
            }
            ClassifierCase::LinearFromN4WithTieAt3 => {
                prop_assert!(maximal(3).contains(&linear_chain(3).unwrap()));
                prop_assert_eq!(maximal(3).len(), 2);
                for n in 4..=60 {
                    prop_assert_eq!(maximal(n), vec![linear_chain(n).unwrap()]);
                }
            }
            ClassifierCase::ZigzagThenLinear => {
                let n_star: usize = verdict.n_star.unwrap().try_into().unwrap_or(usize::MAX);
                for n in 3..=60 {
                    if n < n_star {
                        prop_assert_eq!(maximal(n), vec![zigzag_chain(n).unwrap()], "n = {}", n);
                    } else {
                        prop_assert!(maximal(n).contains(&linear_chain(n).unwrap()), "n = {}", n);
                    }
                }
                if n_star <= 60 {
                    let z = ti_direct(&zigzag_chain(n_star).unwrap(), &f);
                    let li = ti_direct(&linear_chain(n_star).unwrap(), &f);
                    prop_assert_eq!(verdict.zigzag_ties_at_threshold, Some(z.tie(&li)));
                }
            }
            ClassifierCase::NotApplicable => prop_assert!(!verdict.premise_holds),
        }
    }
}

#[test]
fn exact_values_never_lose_precision() {
    // Table entries near 2^116 force the arbitrary-precision path.
    let huge = BigRational::from_integer(BigInt::from(1u8) << 116);
    let third = BigRational::new(1.into(), 3.into());
    let f = IndexFunction::rational("huge", [huge.clone(), third.clone(), huge.clone(), third.clone(), huge, third]);
    let n = 1 << 12;
    let best = dp::maximize(&f, n, None).unwrap();
    assert_exact_eq(&ti_direct(&best.witness, &f), &best.value);
    let streamed = Engine::new(&f).stream(n, dp::Objective::Max).unwrap();
    assert_exact_eq(&streamed.value, &best.value);
}

fn assert_exact_eq(a: &Value, b: &Value) {
    assert!(a.as_rational().is_some() && a.as_rational() == b.as_rational(), "{a} != {b}");
}
