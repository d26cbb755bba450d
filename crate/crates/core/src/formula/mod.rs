//! Formula syntax for the two-variable fragment: vocabulary, AST, parser,
//! printer and ground evaluation.

mod eval;
mod parser;
mod print;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use eval::{
    evaluate, evaluate_ground, Binding, EvalError, GroundArgs, GroundAtom, GroundLiteral, Interpretation, LiteralSet,
};
pub use parser::parse_sentence;
pub use print::FormulaDisplay;

/// One of the two logical variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A subset of `{x, y}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct VarSet(u8);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    fn bit(v: Var) -> u8 {
        match v {
            Var::X => 1,
            Var::Y => 2,
        }
    }

    pub fn singleton(v: Var) -> Self {
        VarSet(Self::bit(v))
    }

    pub fn insert(&mut self, v: Var) {
        self.0 |= Self::bit(v);
    }

    pub fn remove(&mut self, v: Var) {
        self.0 &= !Self::bit(v);
    }

    pub fn contains(self, v: Var) -> bool {
        self.0 & Self::bit(v) != 0
    }

    pub fn union(self, other: VarSet) -> VarSet {
        VarSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Var> {
        [Var::X, Var::Y].into_iter().filter(move |v| self.contains(*v))
    }
}

/// Index of a predicate inside its [`Vocabulary`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredId(pub u32);

impl PredId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arity {
    Unary,
    Binary,
}

impl Arity {
    pub fn count(self) -> usize {
        match self {
            Arity::Unary => 1,
            Arity::Binary => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub name: String,
    pub arity: Arity,
}

/// Ordered predicate signature. Equality is tracked by a flag and is never
/// stored as an ordinary predicate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    predicates: Vec<Predicate>,
    equality_used: bool,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: &str, arity: Arity) -> Result<PredId, FormulaError> {
        if self.lookup(name).is_some() {
            return Err(FormulaError::DuplicatePredicate(name.into()));
        }
        if name == "=" {
            return Err(FormulaError::DuplicatePredicate(name.into()));
        }
        self.predicates.push(Predicate {
            name: name.into(),
            arity,
        });
        Ok(PredId((self.predicates.len() - 1) as u32))
    }

    /// Adds a predicate whose name does not clash with any existing one,
    /// trying `base`, then `base_1`, `base_2`, ...
    pub fn add_fresh(&mut self, base: &str, arity: Arity) -> PredId {
        let mut name = String::from(base);
        let mut k = 0;
        while self.lookup(&name).is_some() {
            k += 1;
            name = format!("{base}_{k}");
        }
        self.add(&name, arity).expect("fresh name is unique")
    }

    pub fn lookup(&self, name: &str) -> Option<PredId> {
        self.predicates
            .iter()
            .position(|p| p.name == name)
            .map(|i| PredId(i as u32))
    }

    pub fn get(&self, id: PredId) -> &Predicate {
        &self.predicates[id.index()]
    }

    pub fn name(&self, id: PredId) -> &str {
        &self.predicates[id.index()].name
    }

    pub fn arity(&self, id: PredId) -> Arity {
        self.predicates[id.index()].arity
    }

    pub fn len(&self) -> usize {
        self.predicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = PredId> + '_ {
        (0..self.predicates.len()).map(|i| PredId(i as u32))
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn unary_ids(&self) -> impl Iterator<Item = PredId> + '_ {
        self.ids().filter(|&p| self.arity(p) == Arity::Unary)
    }

    pub fn binary_ids(&self) -> impl Iterator<Item = PredId> + '_ {
        self.ids().filter(|&p| self.arity(p) == Arity::Binary)
    }

    pub fn equality_used(&self) -> bool {
        self.equality_used
    }

    pub fn set_equality_used(&mut self, used: bool) {
        self.equality_used = used;
    }

    /// Vocabulary made of the first `len` predicates.
    pub fn truncated(&self, len: usize) -> Vocabulary {
        Vocabulary {
            predicates: self.predicates[..len].to_vec(),
            equality_used: self.equality_used,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Args {
    One(Var),
    Two(Var, Var),
}

impl Args {
    pub fn vars(self) -> VarSet {
        match self {
            Args::One(v) => VarSet::singleton(v),
            Args::Two(a, b) => {
                let mut s = VarSet::singleton(a);
                s.insert(b);
                s
            }
        }
    }

    pub fn map(self, f: impl Fn(Var) -> Var) -> Args {
        match self {
            Args::One(v) => Args::One(f(v)),
            Args::Two(a, b) => Args::Two(f(a), f(b)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(PredId, Args),
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn unary(p: PredId, v: Var) -> Formula {
        Formula::Atom(p, Args::One(v))
    }

    pub fn binary(p: PredId, a: Var, b: Var) -> Formula {
        Formula::Atom(p, Args::Two(a, b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    pub fn free_variables(&self) -> VarSet {
        match self {
            Formula::True | Formula::False => VarSet::EMPTY,
            Formula::Atom(_, args) => args.vars(),
            Formula::Eq(a, b) => Args::Two(*a, *b).vars(),
            Formula::Not(f) => f.free_variables(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.free_variables().union(b.free_variables())
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let mut s = body.free_variables();
                s.remove(*v);
                s
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(..) | Formula::Eq(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn uses_equality(&self) -> bool {
        match self {
            Formula::Eq(..) => true,
            Formula::True | Formula::False | Formula::Atom(..) => false,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.uses_equality(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.uses_equality() || b.uses_equality()
            }
        }
    }

    /// Renames every variable occurrence (bound or free) through `f`.
    pub fn rename(&self, f: &impl Fn(Var) -> Var) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(p, args) => Formula::Atom(*p, args.map(f)),
            Formula::Eq(a, b) => Formula::Eq(f(*a), f(*b)),
            Formula::Not(g) => Formula::not(g.rename(f)),
            Formula::And(a, b) => Formula::and(a.rename(f), b.rename(f)),
            Formula::Or(a, b) => Formula::or(a.rename(f), b.rename(f)),
            Formula::Implies(a, b) => Formula::implies(a.rename(f), b.rename(f)),
            Formula::Iff(a, b) => Formula::iff(a.rename(f), b.rename(f)),
            Formula::Forall(v, g) => Formula::forall(f(*v), g.rename(f)),
            Formula::Exists(v, g) => Formula::exists(f(*v), g.rename(f)),
        }
    }

    /// Exchanges `x` and `y` everywhere.
    pub fn swap_vars(&self) -> Formula {
        self.rename(&Var::other)
    }

    /// Top-level conjuncts, flattening nested `And`.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::And(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                other => out.push(other),
            }
        }
        out
    }

    pub fn display<'a>(&'a self, vocabulary: &'a Vocabulary) -> FormulaDisplay<'a> {
        FormulaDisplay::new(self, vocabulary)
    }
}

/// A closed formula together with the vocabulary it is written over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    vocabulary: Vocabulary,
    formula: Formula,
}

impl Sentence {
    pub fn new(mut vocabulary: Vocabulary, formula: Formula) -> Result<Self, FormulaError> {
        if let Some(v) = formula.free_variables().iter().next() {
            return Err(FormulaError::FreeVariable(v));
        }
        if formula.uses_equality() {
            vocabulary.set_equality_used(true);
        }
        Ok(Sentence { vocabulary, formula })
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn uses_equality(&self) -> bool {
        self.vocabulary.equality_used()
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula.display(&self.vocabulary).fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("predicate {predicate} used with {found} arguments but declared with {expected}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("variable `{name}` at byte {pos}: only x and y are allowed")]
    ThirdVariable { name: String, pos: usize },
    #[error("variable {0} is not bound by any quantifier")]
    FreeVariable(Var),
    #[error("predicate `{0}` declared twice")]
    DuplicatePredicate(String),
}
