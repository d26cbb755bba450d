#![allow(dead_code)]

use fo2enum_core::{parse_sentence, Sentence};

pub const GRAPH: &str = "forall x forall y: ~E(x,x) & (E(x,y) -> E(y,x)) & forall x exists y: E(x,y)";

pub const COLORED: &str = "forall x: (~R(x) | ~B(x)) & (R(x) | B(x)) \
    & forall x forall y: (E(x,y) -> (R(x) & B(y)) | (B(x) & R(y))) \
    & forall x forall y: (E(x,y) -> E(y,x))";

pub const TOURNAMENT: &str = "forall x forall y: (L(x,y) -> ~L(y,x)) & forall x exists y: L(x,y)";

pub const NEGATED_BODY: &str = "forall x exists y: ~F(x,y)";

pub const GUARDED: &str = "forall x: (P(x) -> exists y: (R(x,y) & ~P(y)))";

pub const CLOSED_SET: &str = "forall x: (P(x) <-> forall y: (E(x,y) -> P(y)))";

pub const TWO_CLAUSES: &str = "forall x forall y: ~E(x,x) & ~F(x,x) & (E(x,y) -> E(y,x)) \
    & (F(x,y) -> F(y,x)) & ~(E(x,y) & F(x,y)) \
    & forall x exists y: E(x,y) & forall x exists y: F(x,y)";

pub const SINGLETON: &str = "exists x: P(x) & forall x forall y: (P(x) & P(y) -> x = y)";

pub const TRIVIAL_EQ: &str = "forall x forall y: x = y";

pub const GRAPH_WITH_LEADER: &str = "forall x forall y: ~E(x,x) & (E(x,y) -> E(y,x)) \
    & (P(x) & P(y) -> x = y) & forall x exists y: E(x,y)";

pub struct Case {
    pub name: &'static str,
    pub text: &'static str,
    /// Sentence contains a quantifier nested inside another.
    pub nested: bool,
}

pub const SUITE: &[Case] = &[
    Case {
        name: "graph",
        text: GRAPH,
        nested: false,
    },
    Case {
        name: "colored",
        text: COLORED,
        nested: false,
    },
    Case {
        name: "tournament",
        text: TOURNAMENT,
        nested: false,
    },
    Case {
        name: "negated_body",
        text: NEGATED_BODY,
        nested: false,
    },
    Case {
        name: "guarded",
        text: GUARDED,
        nested: true,
    },
    Case {
        name: "closed_set",
        text: CLOSED_SET,
        nested: true,
    },
    Case {
        name: "two_clauses",
        text: TWO_CLAUSES,
        nested: false,
    },
    Case {
        name: "singleton",
        text: SINGLETON,
        nested: false,
    },
    Case {
        name: "trivial_eq",
        text: TRIVIAL_EQ,
        nested: false,
    },
    Case {
        name: "graph_with_leader",
        text: GRAPH_WITH_LEADER,
        nested: false,
    },
];

pub fn parse(text: &str) -> Sentence {
    parse_sentence(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// Every vector of `len` non-negative entries summing to at most `max`.
pub fn vectors_up_to(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0; len];
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            go(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    go(0, max, &mut cur, &mut out);
    out
}
