//! Acceptance run: one PASS/FAIL line per criterion, then a single assertion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use fo2enum::bench::{loglog_slope, measure};
use fo2enum_core::binary::DebugOptions;
use fo2enum_core::config::{compute_delta, Configuration};
use fo2enum_core::oracle::{oracle_config_sat, oracle_extendable, oracle_models, oracle_sentence_models, OracleError};
use fo2enum_core::snf::{back_map_model, to_snf};
use fo2enum_core::{parse_sentence, Enumerator, Sentence};

const GRAPH: &str = "forall x forall y: ~E(x,x) & (E(x,y) -> E(y,x)) & forall x exists y: E(x,y)";
const COLORED: &str = "forall x: (~R(x) | ~B(x)) & (R(x) | B(x)) \
    & forall x forall y: (E(x,y) -> (R(x) & B(y)) | (B(x) & R(y))) \
    & forall x forall y: (E(x,y) -> E(y,x))";
const TRIVIAL_EQ: &str = "forall x forall y: x = y";
const GRAPH_WITH_LEADER: &str = "forall x forall y: ~E(x,x) & (E(x,y) -> E(y,x)) \
    & (P(x) & P(y) -> x = y) & forall x exists y: E(x,y)";

/// (name, text, nested quantifiers)
const SUITE: &[(&str, &str, bool)] = &[
    ("graph", GRAPH, false),
    ("colored", COLORED, false),
    (
        "tournament",
        "forall x forall y: (L(x,y) -> ~L(y,x)) & forall x exists y: L(x,y)",
        false,
    ),
    ("negated_body", "forall x exists y: ~F(x,y)", false),
    ("guarded", "forall x: (P(x) -> exists y: (R(x,y) & ~P(y)))", true),
    ("closed_set", "forall x: (P(x) <-> forall y: (E(x,y) -> P(y)))", true),
    (
        "two_clauses",
        "forall x forall y: ~E(x,x) & ~F(x,x) & (E(x,y) -> E(y,x)) & (F(x,y) -> F(y,x)) \
         & ~(E(x,y) & F(x,y)) & forall x exists y: E(x,y) & forall x exists y: F(x,y)",
        false,
    ),
    (
        "singleton",
        "exists x: P(x) & forall x forall y: (P(x) & P(y) -> x = y)",
        false,
    ),
    ("trivial_eq", TRIVIAL_EQ, false),
    ("graph_with_leader", GRAPH_WITH_LEADER, false),
];

fn parse(text: &str) -> Sentence {
    parse_sentence(text).unwrap()
}

fn enumerator(text: &str) -> Enumerator {
    Enumerator::new(&parse(text)).unwrap()
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.1?}, limit {limit:?}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut runs = 0;
    for &(name, text, _) in SUITE {
        let e = enumerator(text);
        for n in 0..=4 {
            let ours: BTreeSet<_> = e.models(n).collect();
            let expected: BTreeSet<_> = if n == 0 {
                oracle_sentence_models(e.sentence(), 0).unwrap().models
            } else {
                oracle_models(e.snf(), n)
                    .unwrap()
                    .models
                    .iter()
                    .map(|m| back_map_model(m, e.mapping()))
                    .collect()
            };
            ensure(ours == expected, || {
                format!("{name} n={n}: {} vs {}", ours.len(), expected.len())
            })?;
            runs += 1;
        }
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("{runs} (sentence, n) pairs, {:.1?}", start.elapsed()))
}

fn exact_counts() -> Outcome {
    let g = enumerator(GRAPH);
    let c = enumerator(COLORED);
    let got = [g.count(2), g.count(3), g.count(4), c.count(1), c.count(2)];
    ensure(got == [1, 4, 41, 2, 6], || format!("got {got:?}"))?;
    Ok(format!("{got:?}"))
}

fn non_duplication() -> Outcome {
    let mut total = 0;
    for &(name, text, _) in SUITE {
        let e = enumerator(text);
        for n in 0..=4 {
            let all: Vec<_> = e.models(n).collect();
            let set: BTreeSet<_> = all.iter().collect();
            ensure(set.len() == all.len(), || format!("{name} n={n}: duplicate"))?;
            total += all.len();
        }
    }
    Ok(format!("{total} models, all distinct"))
}

fn vectors(len: usize, max: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for v in 0..=max {
        for mut rest in vectors(len - 1, max - v) {
            rest.insert(0, v);
            out.push(rest);
        }
    }
    out
}

struct Grid {
    name: &'static str,
    e: Enumerator,
    answers: Vec<(Vec<u32>, Option<bool>)>,
}

fn oracle_grids() -> Vec<Grid> {
    SUITE
        .iter()
        .map(|&(name, text, _)| {
            let e = enumerator(text);
            let codes: Vec<u64> = e.tables().one_types().iter().map(|t| t.0).collect();
            let answers = vectors(codes.len(), 5)
                .into_iter()
                .map(|c| {
                    let a = match oracle_config_sat(e.snf(), &codes, &c) {
                        Ok(b) => Some(b),
                        Err(OracleError::TooLarge { .. }) => None,
                        Err(err) => panic!("{err}"),
                    };
                    (c, a)
                })
                .collect();
            Grid { name, e, answers }
        })
        .collect()
}

fn configuration_decision(grids: &[Grid]) -> Outcome {
    let start = Instant::now();
    let deltas = (
        compute_delta(grids[0].e.snf(), false),
        compute_delta(grids[1].e.snf(), false),
    );
    ensure(deltas == (3, 1), || format!("delta {deltas:?}"))?;
    let mut checked = 0;
    let mut skipped = 0;
    for g in grids {
        for (c, a) in &g.answers {
            let Some(a) = *a else {
                skipped += 1;
                continue;
            };
            let ours = g.e.sat_cfg(&Configuration(c.clone())).unwrap();
            ensure(ours == a, || format!("{}: {c:?} ours={ours} oracle={a}", g.name))?;
            checked += 1;
        }
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!(
        "{checked} configurations agree ({skipped} beyond oracle limit), delta(G)=3, delta(col)=1"
    ))
}

fn monotonicity_and_clamp(grids: &[Grid]) -> Outcome {
    let mut derivations = 0;
    let mut clamps = 0;
    for g in grids {
        let threshold = u32::from(g.e.with_equality_enabled());
        let delta = g.e.templates().delta();
        let lookup: std::collections::BTreeMap<_, _> = g.answers.iter().cloned().collect();
        for (c, a) in &g.answers {
            let Some(a) = *a else { continue };
            for i in 0..c.len() {
                let mut up = c.clone();
                up[i] += 1;
                if a && c[i] > threshold {
                    if let Some(Some(b)) = lookup.get(&up) {
                        ensure(*b, || format!("{}: {c:?} sat, {up:?} unsat", g.name))?;
                        derivations += 1;
                    }
                }
                if c[i] == delta + 1 {
                    let mut down = c.clone();
                    down[i] = delta;
                    if let Some(Some(b)) = lookup.get(&down) {
                        ensure(*b == a, || format!("{}: {c:?}={a} vs {down:?}={b}", g.name))?;
                        clamps += 1;
                    }
                }
            }
        }
    }
    ensure(derivations > 0 && clamps > 0, || "nothing checked".into())?;
    Ok(format!("{derivations} derivations, {clamps} clamps"))
}

fn checkpoints() -> Outcome {
    let mut total = 0;
    for &(name, text, _) in SUITE {
        let mut e = enumerator(text);
        e.set_debug(DebugOptions {
            shadow: true,
            checkpoints: true,
        });
        let mut stream = e.snf_models(3);
        stream.by_ref().for_each(drop);
        for cp in stream.finish().checkpoints {
            let expected = oracle_extendable(e.snf(), 3, cp.partial.iter()).unwrap();
            ensure(cp.answer == expected, || {
                format!("{name}: checkpoint {} answered {}", total, cp.answer)
            })?;
            total += 1;
        }
    }
    ensure(total > 0, || "no checkpoints recorded".into())?;
    Ok(format!("{total} checkpoints at n=3"))
}

fn shadow() -> Outcome {
    let mut checks = 0;
    for &(name, text, _) in SUITE {
        let mut e = enumerator(text);
        e.set_debug(DebugOptions {
            shadow: true,
            checkpoints: false,
        });
        for n in 1..=4 {
            let mut stream = e.snf_models(n);
            stream.by_ref().for_each(drop);
            let log = stream.finish();
            ensure(log.shadow_mismatches == 0, || {
                format!("{name} n={n}: {} mismatches", log.shadow_mismatches)
            })?;
            checks += log.shadow_checks;
        }
    }
    ensure(checks > 0, || "no shadow checks ran".into())?;
    Ok(format!("{checks} recomputations, 0 mismatches"))
}

fn equality() -> Outcome {
    let t = enumerator(TRIVIAL_EQ);
    let counts: Vec<u64> = (1..=5).map(|n| t.count(n)).collect();
    ensure(counts == [1, 0, 0, 0, 0], || format!("x = y counts {counts:?}"))?;
    let g = enumerator(GRAPH_WITH_LEADER);
    for n in 1..=4 {
        let ours: BTreeSet<_> = g.models(n).collect();
        let expected: BTreeSet<_> = oracle_models(g.snf(), n)
            .unwrap()
            .models
            .iter()
            .map(|m| back_map_model(m, g.mapping()))
            .collect();
        ensure(ours == expected, || format!("graph_with_leader n={n}"))?;
    }
    Ok(format!("x = y counts {counts:?}; graph with leader matches for n <= 4"))
}

fn delay_scaling() -> Outcome {
    let start = Instant::now();
    let e = enumerator(GRAPH);
    let rows: Vec<_> = [8, 16, 32, 64].iter().map(|&n| measure(&e, n, 1000)).collect();
    for r in &rows {
        println!(
            "    n={:<3} models={} mean={:.0}ns max={}ns p99={}ns",
            r.n, r.models, r.mean_ns, r.max_ns, r.p99_ns
        );
    }
    ensure(rows.iter().all(|r| r.models == 1000), || {
        "fewer than 1000 models".into()
    })?;
    let slope = loglog_slope(&rows).ok_or("no slope")?;
    let bound = 100.0 * rows[0].mean_ns * 64.0;
    ensure(slope <= 2.5, || format!("slope {slope:.3} > 2.5"))?;
    ensure((rows[3].max_ns as f64) < bound, || {
        format!("max {}ns >= {bound:.0}ns", rows[3].max_ns)
    })?;
    within(Duration::from_secs(300), start)?;
    Ok(format!(
        "slope {slope:.3} <= 2.5, max(64) {}ns < {bound:.0}ns",
        rows[3].max_ns
    ))
}

fn snf_bijection() -> Outcome {
    let mut pairs = 0;
    for &(name, text, _) in SUITE.iter().filter(|c| c.2) {
        let s = parse(text);
        let (snf, mapping) = to_snf(&s);
        for n in 1..=3 {
            let original = oracle_sentence_models(&s, n).unwrap().models;
            let normal = oracle_models(&snf, n).unwrap().models;
            let mapped: BTreeSet<_> = normal.iter().map(|m| back_map_model(m, &mapping)).collect();
            ensure(original.len() == normal.len(), || {
                format!("{name} n={n}: counts differ")
            })?;
            ensure(mapped.len() == normal.len(), || format!("{name} n={n}: not injective"))?;
            ensure(mapped == original, || format!("{name} n={n}: image differs"))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (sentence, n) pairs"))
}

#[test]
fn acceptance() {
    let grids = oracle_grids();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 oracle equivalence", oracle_equivalence()),
        ("2 exact counts", exact_counts()),
        ("3 non-duplication", non_duplication()),
        ("4 configuration decision", configuration_decision(&grids)),
        ("5 monotonicity and clamp", monotonicity_and_clamp(&grids)),
        ("6 checkpoint equivalence", checkpoints()),
        ("7 shadow invariant", shadow()),
        ("8 equality", equality()),
        ("9 delay scaling", delay_scaling()),
        ("10 normal-form bijection", snf_bijection()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    assert_eq!(failed, 0, "{failed} criteria failed");
}
