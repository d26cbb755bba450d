mod common;

use std::collections::BTreeSet;

use common::*;
use fo2enum_core::config::{discover_templates, Configuration};
use fo2enum_core::formula::{Arity, GroundArgs};
use fo2enum_core::oracle::oracle_models;
use fo2enum_core::types::OneType;
use fo2enum_core::unary::{enum_compositions, enum_partitions, enum_sat_configs};
use fo2enum_core::Enumerator;
use proptest::prelude::*;

#[test]
fn unary_substructures_are_exactly_the_model_projections() {
    for case in SUITE {
        let e = Enumerator::new(&parse(case.text)).unwrap();
        let vocab = e.snf().vocabulary();
        for n in 1..=4 {
            let ours: Vec<Vec<u32>> = e.unary_substructures(n).map(|u| u.assignment).collect();
            let set: BTreeSet<_> = ours.iter().cloned().collect();
            assert_eq!(set.len(), ours.len(), "{} n={n}", case.name);
            let projected: BTreeSet<Vec<u32>> = oracle_models(e.snf(), n)
                .unwrap()
                .models
                .iter()
                .map(|m| {
                    (0..n)
                        .map(|a| {
                            let code = vocab
                                .ids()
                                .map(|p| {
                                    let args = match vocab.arity(p) {
                                        Arity::Unary => GroundArgs::One(a),
                                        Arity::Binary => GroundArgs::Two(a, a),
                                    };
                                    u64::from(m.get(p, args)) << p.index()
                                })
                                .sum();
                            e.tables().index_of(OneType(code)).unwrap() as u32
                        })
                        .collect()
                })
                .collect();
            assert_eq!(set, projected, "{} n={n}", case.name);
        }
    }
}

#[test]
fn streamed_configurations_are_exactly_the_satisfiable_ones() {
    for case in SUITE {
        let e = Enumerator::new(&parse(case.text)).unwrap();
        let eager = discover_templates(e.tables().clone(), e.with_equality_enabled()).unwrap();
        for n in 0..=7 {
            let streamed: Vec<Configuration> = enum_sat_configs(&eager, n).collect();
            let set: BTreeSet<_> = streamed.iter().cloned().collect();
            assert_eq!(set.len(), streamed.len(), "{} n={n}", case.name);
            let expected: BTreeSet<_> = vectors_up_to(e.tables().len(), n)
                .into_iter()
                .filter(|c| c.iter().sum::<u32>() == n)
                .map(Configuration)
                .filter(|c| e.sat_cfg(c).unwrap())
                .collect();
            assert_eq!(set, expected, "{} n={n}", case.name);
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #[test]
    fn composition_count(total in 0u32..12, parts in 1usize..5) {
        let all: Vec<_> = enum_compositions(total, parts).unwrap().collect();
        let expected = binomial(u64::from(total) + parts as u64 - 1, parts as u64 - 1);
        prop_assert_eq!(all.len() as u64, expected);
        prop_assert!(all.iter().all(|c| c.iter().sum::<u32>() == total));
        let set: BTreeSet<_> = all.iter().collect();
        prop_assert_eq!(set.len(), all.len());
    }

    #[test]
    fn partition_count(counts in proptest::collection::vec(0u32..4, 1..5)) {
        let n: u32 = counts.iter().sum();
        let all: Vec<_> = enum_partitions(n, &Configuration(counts.clone())).unwrap().map(|u| u.assignment).collect();
        let mut expected = 1u64;
        let mut placed = 0u64;
        for &c in &counts {
            expected *= binomial(placed + u64::from(c), u64::from(c));
            placed += u64::from(c);
        }
        prop_assert_eq!(all.len() as u64, expected);
        prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
        for a in &all {
            for (i, &c) in counts.iter().enumerate() {
                prop_assert_eq!(a.iter().filter(|&&t| t == i as u32).count() as u32, c);
            }
        }
    }
}
