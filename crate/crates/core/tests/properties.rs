mod common;

use common::*;
use fo2enum_core::config::Configuration;
use fo2enum_core::formula::{Arity, Formula, Var, Vocabulary};
use fo2enum_core::{parse_sentence, Enumerator, Sentence};
use proptest::prelude::*;

fn leaf() -> impl Strategy<Value = Formula> {
    let var = prop_oneof![Just(Var::X), Just(Var::Y)];
    prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (0u32..2, var.clone()).prop_map(|(p, v)| Formula::unary(fo2enum_core::formula::PredId(p), v)),
        (2u32..4, var.clone(), var.clone()).prop_map(|(p, a, b)| Formula::binary(
            fo2enum_core::formula::PredId(p),
            a,
            b
        )),
        (var.clone(), var).prop_map(|(a, b)| Formula::Eq(a, b)),
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        let var = prop_oneof![Just(Var::X), Just(Var::Y)];
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, f)| Formula::forall(v, f)),
            (var, inner).prop_map(|(v, f)| Formula::exists(v, f)),
        ]
    })
}

fn vocabulary() -> Vocabulary {
    let mut v = Vocabulary::new();
    for (name, arity) in [
        ("P", Arity::Unary),
        ("Q", Arity::Unary),
        ("E", Arity::Binary),
        ("F", Arity::Binary),
    ] {
        v.add(name, arity).unwrap();
    }
    v
}

fn sentence(f: Formula) -> Sentence {
    Sentence::new(vocabulary(), Formula::forall(Var::X, Formula::forall(Var::Y, f))).unwrap()
}

proptest! {
    #[test]
    fn printing_then_parsing_is_a_fixed_point(f in formula()) {
        let s = sentence(f);
        let printed = s.to_string();
        let reparsed = parse_sentence(&printed).unwrap();
        prop_assert_eq!(reparsed.to_string(), printed);
    }

    #[test]
    fn clamping_preserves_answers(counts in proptest::collection::vec(0u32..40, 1)) {
        let e = Enumerator::new(&parse(GRAPH)).unwrap();
        let c = Configuration(counts);
        let clamped = e.templates().clamp(&c);
        prop_assert_eq!(e.sat_cfg(&c).unwrap(), e.sat_cfg(&clamped).unwrap());
    }

    #[test]
    fn growing_a_positive_entry_keeps_satisfiability(
        counts in proptest::collection::vec(0u32..30, 2),
        i in 0usize..2,
    ) {
        let e = Enumerator::new(&parse(COLORED)).unwrap();
        let c = Configuration(counts);
        if c.get(i) > 0 && e.sat_cfg(&c).unwrap() {
            prop_assert!(e.sat_cfg(&c.with(i, c.get(i) + 1)).unwrap());
        }
    }

    #[test]
    fn equality_threshold_is_respected(counts in proptest::collection::vec(0u32..20, 1..3)) {
        let e = Enumerator::new(&parse(GRAPH_WITH_LEADER)).unwrap();
        let mut counts = counts;
        counts.resize(e.tables().len(), 0);
        let c = Configuration(counts);
        if e.sat_cfg(&c).unwrap() {
            for i in 0..c.len() {
                if c.get(i) > 1 {
                    prop_assert!(e.sat_cfg(&c.with(i, c.get(i) + 1)).unwrap());
                }
            }
        }
    }
}
