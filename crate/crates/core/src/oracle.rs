//! Brute-force reference semantics.
//!
//! Nothing here uses types, tables or configurations; models are found by
//! searching over ground atoms and evaluating formulas directly.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::formula::{evaluate, evaluate_ground, Arity, Binding, GroundArgs, GroundAtom, GroundLiteral, Sentence};
use crate::snf::SnfSentence;
use crate::structure::Structure;

/// Largest number of ground atoms the pruned normal-form search accepts.
pub const MAX_ATOMS: usize = 64;
/// Largest number of ground atoms for plain exhaustive evaluation.
pub const MAX_SENTENCE_ATOMS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{atoms} ground atoms exceed the limit of {limit}")]
    TooLarge { atoms: usize, limit: usize },
    #[error("partial structure assigns both signs to {0:?}")]
    ContradictoryPartial(GroundAtom),
    #[error("atom {0:?} lies outside the domain or vocabulary")]
    OutOfDomain(GroundAtom),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleResult {
    pub models: BTreeSet<Structure>,
}

impl OracleResult {
    pub fn count(&self) -> usize {
        self.models.len()
    }
}

enum Step {
    Assign(GroundAtom),
    Check(u32, u32),
}

/// Atoms ordered so that every instance `phi(a, b)` is checked as soon as
/// the atoms it reads are assigned.
fn plan(arities: &[Arity], n: u32) -> Vec<Step> {
    let mut steps = Vec::new();
    for hi in 0..n {
        for (p, a) in arities.iter().enumerate() {
            let pred = crate::formula::PredId(p as u32);
            let args = match a {
                Arity::Unary => GroundArgs::One(hi),
                Arity::Binary => GroundArgs::Two(hi, hi),
            };
            steps.push(Step::Assign(GroundAtom { pred, args }));
        }
        steps.push(Step::Check(hi, hi));
        for lo in 0..hi {
            for (p, a) in arities.iter().enumerate() {
                if *a == Arity::Binary {
                    let pred = crate::formula::PredId(p as u32);
                    steps.push(Step::Assign(GroundAtom {
                        pred,
                        args: GroundArgs::Two(lo, hi),
                    }));
                    steps.push(Step::Assign(GroundAtom {
                        pred,
                        args: GroundArgs::Two(hi, lo),
                    }));
                }
            }
            steps.push(Step::Check(lo, hi));
        }
    }
    steps
}

fn atom_count(arities: &[Arity], n: u32) -> usize {
    arities
        .iter()
        .map(|a| match a {
            Arity::Unary => n as usize,
            Arity::Binary => (n * n) as usize,
        })
        .sum()
}

struct Dfs<'a> {
    snf: &'a SnfSentence,
    steps: Vec<Step>,
    fixed: BTreeMap<GroundAtom, bool>,
    current: Structure,
    stop_at_first: bool,
    found: BTreeSet<Structure>,
}

impl Dfs<'_> {
    fn witnessed(&self) -> bool {
        let n = self.current.domain_size();
        self.snf.clauses().iter().all(|c| {
            (0..n).all(|e| {
                if c.guard.is_some_and(|g| !self.current.unary(g, e)) {
                    return true;
                }
                (0..n).any(|f| {
                    self.current.binary(c.witness, e, f) && !c.blocker.is_some_and(|k| self.current.binary(k, e, f))
                })
            })
        })
    }

    fn instance(&self, a: u32, b: u32) -> bool {
        let phi = self.snf.phi();
        let ok = |x, y| evaluate_ground(phi, &Binding::new(x, y), &self.current).expect("structure is total");
        ok(a, b) && (a == b || ok(b, a))
    }

    /// Returns `true` to stop the search.
    fn run(&mut self, i: usize) -> bool {
        let Some(step) = self.steps.get(i) else {
            if self.witnessed() {
                self.found.insert(self.current.clone());
                return self.stop_at_first;
            }
            return false;
        };
        match *step {
            Step::Check(a, b) => self.instance(a, b) && self.run(i + 1),
            Step::Assign(atom) => {
                let choices: &[bool] = match self.fixed.get(&atom) {
                    Some(true) => &[true],
                    Some(false) => &[false],
                    None => &[false, true],
                };
                for &v in choices {
                    self.current.set(atom.pred, atom.args, v);
                    if self.run(i + 1) {
                        return true;
                    }
                }
                self.current.set(atom.pred, atom.args, false);
                false
            }
        }
    }
}

fn search(
    snf: &SnfSentence,
    n: u32,
    fixed: BTreeMap<GroundAtom, bool>,
    stop_at_first: bool,
) -> Result<BTreeSet<Structure>, OracleError> {
    let structure = Structure::for_vocabulary(snf.vocabulary(), n);
    let atoms = atom_count(structure.arities(), n);
    if atoms > MAX_ATOMS {
        return Err(OracleError::TooLarge {
            atoms,
            limit: MAX_ATOMS,
        });
    }
    let mut dfs = Dfs {
        snf,
        steps: plan(structure.arities(), n),
        fixed,
        current: structure,
        stop_at_first,
        found: BTreeSet::new(),
    };
    dfs.run(0);
    Ok(dfs.found)
}

/// Every model of a normal-form sentence over `{0, .., n - 1}`.
pub fn oracle_models(snf: &SnfSentence, n: u32) -> Result<OracleResult, OracleError> {
    Ok(OracleResult {
        models: search(snf, n, BTreeMap::new(), false)?,
    })
}

/// Whether some model over `{0, .., n - 1}` contains every literal of
/// `partial`.
pub fn oracle_extendable(
    snf: &SnfSentence,
    n: u32,
    partial: impl IntoIterator<Item = GroundLiteral>,
) -> Result<bool, OracleError> {
    let vocab = snf.vocabulary();
    let mut fixed = BTreeMap::new();
    for lit in partial {
        let atom = lit.atom;
        let in_range = atom.pred.index() < vocab.len()
            && match (vocab.arity(atom.pred), atom.args) {
                (Arity::Unary, GroundArgs::One(a)) => a < n,
                (Arity::Binary, GroundArgs::Two(a, b)) => a < n && b < n,
                _ => false,
            };
        if !in_range {
            return Err(OracleError::OutOfDomain(atom));
        }
        if fixed.insert(atom, lit.positive).is_some_and(|old| old != lit.positive) {
            return Err(OracleError::ContradictoryPartial(atom));
        }
    }
    Ok(!search(snf, n, fixed, true)?.is_empty())
}

/// Whether a model exists whose elements realize the given 1-type codes
/// with the given multiplicities. Bit `i` of a code is `P_i(x)` for unary
/// and `P_i(x,x)` for binary predicates.
pub fn oracle_config_sat(snf: &SnfSentence, codes: &[u64], counts: &[u32]) -> Result<bool, OracleError> {
    let vocab = snf.vocabulary();
    let mut partial = Vec::new();
    let mut e = 0u32;
    for (&code, &c) in codes.iter().zip(counts) {
        for _ in 0..c {
            for p in vocab.ids() {
                let args = match vocab.arity(p) {
                    Arity::Unary => GroundArgs::One(e),
                    Arity::Binary => GroundArgs::Two(e, e),
                };
                partial.push(GroundLiteral::new(p, args, code >> p.index() & 1 == 1));
            }
            e += 1;
        }
    }
    oracle_extendable(snf, e, partial)
}

/// Every model of an arbitrary sentence over `{0, .., n - 1}`, by evaluating
/// it on every structure.
pub fn oracle_sentence_models(sentence: &Sentence, n: u32) -> Result<OracleResult, OracleError> {
    let base = Structure::for_vocabulary(sentence.vocabulary(), n);
    let atoms: Vec<GroundAtom> = base.atoms().collect();
    if atoms.len() > MAX_SENTENCE_ATOMS {
        return Err(OracleError::TooLarge {
            atoms: atoms.len(),
            limit: MAX_SENTENCE_ATOMS,
        });
    }
    let mut models = BTreeSet::new();
    for bits in 0u64..1 << atoms.len() {
        let mut s = base.clone();
        for (i, a) in atoms.iter().enumerate() {
            if bits >> i & 1 == 1 {
                s.set(a.pred, a.args, true);
            }
        }
        if evaluate(sentence.formula(), &Binding::default(), &s, n).expect("sentence is closed") {
            models.insert(s);
        }
    }
    Ok(OracleResult { models })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_sentence, PredId};
    use crate::snf::to_snf;

    const GRAPH: &str = "forall x forall y: ~E(x,x) & (E(x,y) -> E(y,x)) & forall x exists y: E(x,y)";

    fn graph() -> (Sentence, SnfSentence) {
        let s = parse_sentence(GRAPH).unwrap();
        let snf = to_snf(&s).0;
        (s, snf)
    }

    fn edge(a: u32, b: u32, positive: bool) -> GroundLiteral {
        GroundLiteral::new(PredId(0), GroundArgs::Two(a, b), positive)
    }

    #[test]
    fn graph_counts() {
        let (s, snf) = graph();
        assert_eq!(oracle_models(&snf, 2).unwrap().count(), 1);
        assert_eq!(oracle_models(&snf, 3).unwrap().count(), 4);
        assert_eq!(oracle_models(&snf, 4).unwrap().count(), 41);
        assert_eq!(oracle_sentence_models(&s, 3).unwrap(), oracle_models(&snf, 3).unwrap());
    }

    #[test]
    fn extendability() {
        let (_, snf) = graph();
        let isolated = [
            edge(0, 1, false),
            edge(1, 0, false),
            edge(0, 2, false),
            edge(2, 0, false),
        ];
        assert_eq!(oracle_extendable(&snf, 3, isolated), Ok(false));
        assert_eq!(oracle_extendable(&snf, 3, []), Ok(true));
        assert_eq!(oracle_extendable(&snf, 3, [edge(0, 0, true)]), Ok(false));
        assert!(matches!(
            oracle_extendable(&snf, 3, [edge(0, 1, true), edge(0, 1, false)]),
            Err(OracleError::ContradictoryPartial(_))
        ));
    }

    #[test]
    fn config_sat() {
        let (_, snf) = graph();
        assert_eq!(oracle_config_sat(&snf, &[0], &[1]), Ok(false));
        assert_eq!(oracle_config_sat(&snf, &[0], &[3]), Ok(true));
        assert_eq!(oracle_config_sat(&snf, &[0], &[0]), Ok(true));
    }

    #[test]
    fn guard() {
        let (s, snf) = graph();
        assert!(matches!(oracle_models(&snf, 9), Err(OracleError::TooLarge { .. })));
        assert!(matches!(
            oracle_sentence_models(&s, 5),
            Err(OracleError::TooLarge { .. })
        ));
    }
}
