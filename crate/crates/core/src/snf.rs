//! Scott normal form.
//!
//! A sentence in this form is `forall x forall y: phi(x,y)` conjoined with
//! clauses `forall x exists y: B(x,y)` where `phi` is quantifier-free and each
//! `B` is a binary predicate. Every auxiliary predicate introduced by
//! [`to_snf`] is pinned down by a biconditional inside `phi`, so dropping the
//! auxiliary literals is a bijection from models of the normal form onto
//! models of the input over any non-empty domain.

use alloc::vec::Vec;

use crate::formula::{Args, Arity, Formula, PredId, Sentence, Var, Vocabulary};
use crate::structure::Structure;

/// One existential conjunct `forall x: [G(x) ->] exists y: W(x,y) [& ~K(x,y)]`.
///
/// Sentences produced by [`to_snf`] never set `guard` or `blocker`; the
/// auxiliary sentence used by the binary enumerator does.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExistsClause {
    /// The binary witness predicate.
    pub witness: PredId,
    /// Unary predicate; an element owes a witness only if it is true there.
    pub guard: Option<PredId>,
    /// Binary predicate; a pair where it holds does not count as a witness.
    pub blocker: Option<PredId>,
}

impl ExistsClause {
    pub fn plain(witness: PredId) -> Self {
        ExistsClause {
            witness,
            guard: None,
            blocker: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfSentence {
    vocabulary: Vocabulary,
    phi: Formula,
    clauses: Vec<ExistsClause>,
    original_len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SnfError {
    #[error("the universal part must be quantifier-free")]
    QuantifiedPhi,
    #[error("predicate {0:?} has the wrong arity for its role")]
    WrongArity(PredId),
}

impl SnfSentence {
    /// Assembles a normal-form sentence. Predicates with index `>=
    /// original_len` are treated as auxiliary.
    pub fn from_parts(
        vocabulary: Vocabulary,
        phi: Formula,
        clauses: Vec<ExistsClause>,
        original_len: usize,
    ) -> Result<Self, SnfError> {
        if !phi.is_quantifier_free() {
            return Err(SnfError::QuantifiedPhi);
        }
        for c in &clauses {
            if vocabulary.arity(c.witness) != Arity::Binary {
                return Err(SnfError::WrongArity(c.witness));
            }
            if let Some(g) = c.guard {
                if vocabulary.arity(g) != Arity::Unary {
                    return Err(SnfError::WrongArity(g));
                }
            }
            if let Some(k) = c.blocker {
                if vocabulary.arity(k) != Arity::Binary {
                    return Err(SnfError::WrongArity(k));
                }
            }
        }
        Ok(SnfSentence {
            vocabulary,
            phi,
            clauses,
            original_len,
        })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn phi(&self) -> &Formula {
        &self.phi
    }

    pub fn clauses(&self) -> &[ExistsClause] {
        &self.clauses
    }

    /// Witness predicates of the existential clauses, in order.
    pub fn betas(&self) -> Vec<PredId> {
        self.clauses.iter().map(|c| c.witness).collect()
    }

    /// Number of existential clauses.
    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn original_len(&self) -> usize {
        self.original_len
    }

    pub fn aux_predicates(&self) -> impl Iterator<Item = PredId> {
        (self.original_len..self.vocabulary.len()).map(|i| PredId(i as u32))
    }

    pub fn uses_equality(&self) -> bool {
        self.vocabulary.equality_used()
    }

    /// The sentence written back as an ordinary formula.
    pub fn to_sentence(&self) -> Sentence {
        let mut parts = alloc::vec![Formula::forall(Var::X, Formula::forall(Var::Y, self.phi.clone()))];
        for c in &self.clauses {
            let mut body = Formula::binary(c.witness, Var::X, Var::Y);
            if let Some(k) = c.blocker {
                body = Formula::and(body, Formula::not(Formula::binary(k, Var::X, Var::Y)));
            }
            let mut ex = Formula::exists(Var::Y, body);
            if let Some(g) = c.guard {
                ex = Formula::implies(Formula::unary(g, Var::X), ex);
            }
            parts.push(Formula::forall(Var::X, ex));
        }
        Sentence::new(self.vocabulary.clone(), Formula::and_all(parts)).expect("normal form is closed")
    }
}

/// Definition of one auxiliary predicate over the smaller vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub predicate: PredId,
    /// For a unary predicate `A`: a formula with `x` free, `A(x) <-> formula`.
    /// For a binary predicate `B`: a quantifier-free formula, `B(x,y) <-> formula`.
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackMapping {
    original: Vocabulary,
    definitions: Vec<Definition>,
}

impl BackMapping {
    pub fn original_vocabulary(&self) -> &Vocabulary {
        &self.original
    }

    pub fn definitions(&self) -> &[Definition] {
        &self.definitions
    }

    pub fn is_identity(&self) -> bool {
        self.definitions.is_empty()
    }
}

/// Maps a model of the normal form to the corresponding model of the input
/// sentence by dropping auxiliary predicates. Linear in the structure size.
pub fn back_map_model(snf_model: &Structure, mapping: &BackMapping) -> Structure {
    snf_model.restrict(mapping.original.len())
}

struct Builder {
    vocabulary: Vocabulary,
    phi: Vec<Formula>,
    clauses: Vec<ExistsClause>,
    definitions: Vec<Definition>,
}

fn x() -> Var {
    Var::X
}

impl Builder {
    fn fresh_unary(&mut self) -> PredId {
        let k = self
            .definitions
            .iter()
            .filter(|d| self.vocabulary.arity(d.predicate) == Arity::Unary)
            .count();
        self.vocabulary.add_fresh(&alloc::format!("A{}", k + 1), Arity::Unary)
    }

    fn fresh_binary(&mut self) -> PredId {
        let k = self
            .definitions
            .iter()
            .filter(|d| self.vocabulary.arity(d.predicate) == Arity::Binary)
            .count();
        self.vocabulary.add_fresh(&alloc::format!("B{}", k + 1), Arity::Binary)
    }

    /// Adds `forall x exists y: theta(x,y)`.
    fn exists_clause(&mut self, theta: Formula) {
        if let Formula::Atom(r, Args::Two(Var::X, Var::Y)) = theta {
            self.clauses.push(ExistsClause::plain(r));
            return;
        }
        let b = self.fresh_binary();
        self.phi
            .push(Formula::iff(Formula::binary(b, Var::X, Var::Y), theta.clone()));
        self.definitions.push(Definition {
            predicate: b,
            formula: theta,
        });
        self.clauses.push(ExistsClause::plain(b));
    }

    fn conjunct(&mut self, c: &Formula) {
        match c {
            Formula::True => {}
            Formula::Forall(v, body) => match &**body {
                Formula::Forall(w, m) if w != v => {
                    let m = self.replace_inner(m, *w);
                    self.phi.push(m);
                }
                Formula::Exists(w, m) if w != v => {
                    let m = self.replace_inner(m, *w);
                    let theta = if *v == Var::X { m } else { m.swap_vars() };
                    self.exists_clause(theta);
                }
                _ => {
                    let b = self.replace_inner(body, *v);
                    self.phi.push(b.rename(&|_| x()));
                }
            },
            Formula::Exists(v, m) => {
                // exists v: m(v)  ==  forall x exists y: m(y)
                let m = self.replace_inner(m, *v);
                let theta = m.rename(&|_| Var::Y);
                self.exists_clause(theta);
            }
            other => {
                let b = self.replace_inner(other, Var::X);
                self.phi.push(b);
            }
        }
    }

    /// Replaces every quantified subformula of `f` by an atom over a fresh
    /// unary predicate. `ctx` is the variable bound by the nearest enclosing
    /// quantifier.
    fn replace_inner(&mut self, f: &Formula, ctx: Var) -> Formula {
        match f {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => f.clone(),
            Formula::Not(g) => Formula::not(self.replace_inner(g, ctx)),
            Formula::And(a, b) => Formula::and(self.replace_inner(a, ctx), self.replace_inner(b, ctx)),
            Formula::Or(a, b) => Formula::or(self.replace_inner(a, ctx), self.replace_inner(b, ctx)),
            Formula::Implies(a, b) => Formula::implies(self.replace_inner(a, ctx), self.replace_inner(b, ctx)),
            Formula::Iff(a, b) => Formula::iff(self.replace_inner(a, ctx), self.replace_inner(b, ctx)),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let universal = matches!(f, Formula::Forall(..));
                let inner = self.replace_inner(g, *v);
                let free = f.free_variables();
                let slot = free.iter().next().unwrap_or(ctx);
                // orient so the bound variable is y and the free slot is x
                let theta = if *v == Var::X { inner.swap_vars() } else { inner };
                self.define(universal, theta, slot)
            }
        }
    }

    /// Introduces `A` with `forall x: A(x) <-> Q y: theta(x,y)` and returns
    /// the atom `A(slot)`.
    fn define(&mut self, universal: bool, theta: Formula, slot: Var) -> Formula {
        let a = self.fresh_unary();
        let ax = Formula::unary(a, Var::X);
        let b = self.fresh_binary();
        let bxy = Formula::binary(b, Var::X, Var::Y);
        let (defining, witness_body) = if universal {
            // A(x) -> theta(x,y); ~A(x) -> exists y: ~theta(x,y)
            self.phi.push(Formula::implies(ax.clone(), theta.clone()));
            (
                Formula::forall(Var::Y, theta.clone()),
                Formula::or(ax.clone(), Formula::not(theta)),
            )
        } else {
            // A(x) -> exists y: theta(x,y); ~A(x) -> ~theta(x,y)
            self.phi
                .push(Formula::implies(Formula::not(ax.clone()), Formula::not(theta.clone())));
            (
                Formula::exists(Var::Y, theta.clone()),
                Formula::or(Formula::not(ax.clone()), theta),
            )
        };
        self.phi.push(Formula::iff(bxy, witness_body.clone()));
        self.definitions.push(Definition {
            predicate: a,
            formula: defining,
        });
        self.definitions.push(Definition {
            predicate: b,
            formula: witness_body,
        });
        self.clauses.push(ExistsClause::plain(b));
        Formula::unary(a, slot)
    }
}

/// Transforms a sentence into Scott normal form.
pub fn to_snf(sentence: &Sentence) -> (SnfSentence, BackMapping) {
    let mut b = Builder {
        vocabulary: sentence.vocabulary().clone(),
        phi: Vec::new(),
        clauses: Vec::new(),
        definitions: Vec::new(),
    };
    for c in sentence.formula().conjuncts() {
        b.conjunct(c);
    }
    let original_len = sentence.vocabulary().len();
    let snf = SnfSentence::from_parts(b.vocabulary, Formula::and_all(b.phi), b.clauses, original_len)
        .expect("builder keeps phi quantifier-free and witnesses binary");
    let mapping = BackMapping {
        original: sentence.vocabulary().clone(),
        definitions: b.definitions,
    };
    (snf, mapping)
}

/// Whether the sentence is already a conjunction of universal blocks and
/// `forall x exists y: R(x,y)` clauses with `R` a positive binary atom.
pub fn is_snf(sentence: &Sentence) -> bool {
    sentence.formula().conjuncts().into_iter().all(|c| match c {
        Formula::True => true,
        Formula::Forall(v, body) => match &**body {
            Formula::Forall(_, m) => m.is_quantifier_free(),
            Formula::Exists(w, m) if w != v => {
                matches!(&**m, Formula::Atom(_, Args::Two(a, b)) if a == v && b == w)
            }
            other => other.is_quantifier_free(),
        },
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_sentence;

    const GRAPH: &str = "forall x forall y: ~E(x,x) & (E(x,y) -> E(y,x)) & forall x exists y: E(x,y)";
    const COLORED: &str = "forall x: (~R(x) | ~B(x)) & (R(x) | B(x)) \
        & forall x forall y: (E(x,y) -> (R(x) & B(y)) | (B(x) & R(y))) \
        & forall x forall y: (E(x,y) -> E(y,x))";

    #[test]
    fn graph_sentence_needs_no_aux() {
        let s = parse_sentence(GRAPH).unwrap();
        let (snf, map) = to_snf(&s);
        assert_eq!(snf.m(), 1);
        assert_eq!(snf.betas(), [PredId(0)]);
        assert_eq!(snf.aux_predicates().count(), 0);
        assert!(map.is_identity());
        let e = PredId(0);
        let expected = Formula::and(
            Formula::not(Formula::binary(e, Var::X, Var::X)),
            Formula::implies(Formula::binary(e, Var::X, Var::Y), Formula::binary(e, Var::Y, Var::X)),
        );
        assert_eq!(snf.phi(), &expected);
    }

    #[test]
    fn negated_body_gets_fresh_beta() {
        let s = parse_sentence("forall x exists y: ~F(x,y)").unwrap();
        let (snf, map) = to_snf(&s);
        assert_eq!(snf.m(), 1);
        let beta = snf.betas()[0];
        assert_ne!(beta, PredId(0));
        assert_eq!(snf.vocabulary().name(beta), "B1");
        let expected = Formula::iff(
            Formula::binary(beta, Var::X, Var::Y),
            Formula::not(Formula::binary(PredId(0), Var::X, Var::Y)),
        );
        assert_eq!(snf.phi(), &expected);
        assert_eq!(map.definitions().len(), 1);
    }

    #[test]
    fn purely_universal_has_no_clauses() {
        let s = parse_sentence(COLORED).unwrap();
        let (snf, _) = to_snf(&s);
        assert_eq!(snf.m(), 0);
        assert!(snf.betas().is_empty());
    }

    #[test]
    fn snf_detection() {
        assert!(is_snf(&parse_sentence(GRAPH).unwrap()));
        assert!(is_snf(&parse_sentence(COLORED).unwrap()));
        assert!(!is_snf(
            &parse_sentence("forall x: (P(x) -> exists y: R(x,y))").unwrap()
        ));
        assert!(!is_snf(&parse_sentence("forall x exists y: E(y,x)").unwrap()));
    }

    #[test]
    fn nested_quantifier_is_flattened() {
        let s = parse_sentence("forall x: (P(x) -> exists y: R(x,y))").unwrap();
        let (snf, map) = to_snf(&s);
        assert!(snf.phi().is_quantifier_free());
        assert_eq!(snf.m(), 1);
        // A1 for the inner existential, B1 its witness
        assert_eq!(snf.aux_predicates().count(), 2);
        assert_eq!(map.definitions().len(), 2);
        let text = alloc::string::ToString::to_string(&snf.to_sentence());
        assert!(parse_sentence(&text).is_ok());
    }

    #[test]
    fn equality_stays_in_phi() {
        let s = parse_sentence("forall x exists y: x != y").unwrap();
        let (snf, _) = to_snf(&s);
        assert!(snf.uses_equality());
        assert!(snf.phi().uses_equality());
        let s = parse_sentence("forall x forall y: x = y").unwrap();
        let (snf, _) = to_snf(&s);
        assert_eq!(snf.phi(), &Formula::Eq(Var::X, Var::Y));
    }
}
