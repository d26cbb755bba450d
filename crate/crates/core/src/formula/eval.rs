use alloc::collections::BTreeMap;

use super::{Args, Formula, PredId, Var};

/// Truth values of ground atoms. Elements are 0-based ids.
pub trait Interpretation {
    /// `None` when the atom has no assigned truth value.
    fn value(&self, pred: PredId, args: GroundArgs) -> Option<bool>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundArgs {
    One(u32),
    Two(u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: PredId,
    pub args: GroundArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundLiteral {
    pub atom: GroundAtom,
    pub positive: bool,
}

impl GroundLiteral {
    pub fn new(pred: PredId, args: GroundArgs, positive: bool) -> Self {
        GroundLiteral {
            atom: GroundAtom { pred, args },
            positive,
        }
    }
}

/// A consistent set of ground literals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LiteralSet {
    map: BTreeMap<GroundAtom, bool>,
}

impl LiteralSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a literal. Returns `false` (leaving the set unchanged) if the
    /// opposite literal is already present.
    pub fn insert(&mut self, lit: GroundLiteral) -> bool {
        match self.map.get(&lit.atom) {
            Some(&v) if v != lit.positive => false,
            _ => {
                self.map.insert(lit.atom, lit.positive);
                true
            }
        }
    }

    pub fn get(&self, atom: &GroundAtom) -> Option<bool> {
        self.map.get(atom).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = GroundLiteral> + '_ {
        self.map.iter().map(|(a, &p)| GroundLiteral { atom: *a, positive: p })
    }
}

impl FromIterator<GroundLiteral> for LiteralSet {
    fn from_iter<T: IntoIterator<Item = GroundLiteral>>(iter: T) -> Self {
        let mut s = LiteralSet::new();
        for l in iter {
            s.insert(l);
        }
        s
    }
}

impl Interpretation for LiteralSet {
    fn value(&self, pred: PredId, args: GroundArgs) -> Option<bool> {
        self.map.get(&GroundAtom { pred, args }).copied()
    }
}

/// Assignment of domain elements to the variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Binding {
    pub x: Option<u32>,
    pub y: Option<u32>,
}

impl Binding {
    pub fn new(x: u32, y: u32) -> Self {
        Binding { x: Some(x), y: Some(y) }
    }

    pub fn get(&self, v: Var) -> Option<u32> {
        match v {
            Var::X => self.x,
            Var::Y => self.y,
        }
    }

    pub fn with(mut self, v: Var, e: u32) -> Self {
        match v {
            Var::X => self.x = Some(e),
            Var::Y => self.y = Some(e),
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("atom {0:?} has no truth value")]
    UnassignedAtom(GroundAtom),
    #[error("variable {0} is unbound")]
    UnboundVariable(Var),
    #[error("quantifier found in a formula evaluated as quantifier-free")]
    Quantified,
}

fn lookup(binding: &Binding, v: Var) -> Result<u32, EvalError> {
    binding.get(v).ok_or(EvalError::UnboundVariable(v))
}

fn eval(f: &Formula, binding: &Binding, interp: &impl Interpretation, domain: Option<u32>) -> Result<bool, EvalError> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(p, args) => {
            let args = match *args {
                Args::One(v) => GroundArgs::One(lookup(binding, v)?),
                Args::Two(a, b) => GroundArgs::Two(lookup(binding, a)?, lookup(binding, b)?),
            };
            interp
                .value(*p, args)
                .ok_or(EvalError::UnassignedAtom(GroundAtom { pred: *p, args }))?
        }
        Formula::Eq(a, b) => lookup(binding, *a)? == lookup(binding, *b)?,
        Formula::Not(g) => !eval(g, binding, interp, domain)?,
        Formula::And(a, b) => eval(a, binding, interp, domain)? && eval(b, binding, interp, domain)?,
        Formula::Or(a, b) => eval(a, binding, interp, domain)? || eval(b, binding, interp, domain)?,
        Formula::Implies(a, b) => !eval(a, binding, interp, domain)? || eval(b, binding, interp, domain)?,
        Formula::Iff(a, b) => eval(a, binding, interp, domain)? == eval(b, binding, interp, domain)?,
        Formula::Forall(v, g) => {
            let n = domain.ok_or(EvalError::Quantified)?;
            for e in 0..n {
                if !eval(g, &binding.with(*v, e), interp, domain)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Exists(v, g) => {
            let n = domain.ok_or(EvalError::Quantified)?;
            for e in 0..n {
                if eval(g, &binding.with(*v, e), interp, domain)? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

/// Evaluates a quantifier-free formula under `binding`. Equality compares
/// element identity and never consults `interp`.
pub fn evaluate_ground(formula: &Formula, binding: &Binding, interp: &impl Interpretation) -> Result<bool, EvalError> {
    eval(formula, binding, interp, None)
}

/// Evaluates an arbitrary formula over the domain `{0, .., domain_size - 1}`.
pub fn evaluate(
    formula: &Formula,
    binding: &Binding,
    interp: &impl Interpretation,
    domain_size: u32,
) -> Result<bool, EvalError> {
    eval(formula, binding, interp, Some(domain_size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_sentence;

    fn phi_g() -> Formula {
        // the universal part of the isolate-free graph sentence
        let s = parse_sentence("forall x forall y: ~E(x,x) & (E(x,y) -> E(y,x))").unwrap();
        match s.formula() {
            Formula::Forall(_, b) => match &**b {
                Formula::Forall(_, phi) => (**phi).clone(),
                _ => unreachable!(),
            },
            _ => unreachable!(),
        }
    }

    #[test]
    fn self_loop_clause() {
        let phi = phi_g();
        let e = PredId(0);
        let ok: LiteralSet = [GroundLiteral::new(e, GroundArgs::Two(0, 0), false)]
            .into_iter()
            .collect();
        assert_eq!(evaluate_ground(&phi, &Binding::new(0, 0), &ok), Ok(true));
        let bad: LiteralSet = [GroundLiteral::new(e, GroundArgs::Two(0, 0), true)]
            .into_iter()
            .collect();
        assert_eq!(evaluate_ground(&phi, &Binding::new(0, 0), &bad), Ok(false));
    }

    #[test]
    fn equality_ignores_literals() {
        let f = Formula::Eq(Var::X, Var::Y);
        let empty = LiteralSet::new();
        assert_eq!(evaluate_ground(&f, &Binding::new(0, 1), &empty), Ok(false));
        assert_eq!(evaluate_ground(&f, &Binding::new(1, 1), &empty), Ok(true));
    }

    #[test]
    fn unassigned_atom_reported() {
        let phi = phi_g();
        let r = evaluate_ground(&phi, &Binding::new(0, 1), &LiteralSet::new());
        assert!(matches!(r, Err(EvalError::UnassignedAtom(_))));
        let q = Formula::exists(Var::Y, Formula::True);
        assert_eq!(
            evaluate_ground(&q, &Binding::default(), &LiteralSet::new()),
            Err(EvalError::Quantified)
        );
    }

    #[test]
    fn contradictory_insert_rejected() {
        let mut s = LiteralSet::new();
        assert!(s.insert(GroundLiteral::new(PredId(0), GroundArgs::One(0), true)));
        assert!(!s.insert(GroundLiteral::new(PredId(0), GroundArgs::One(0), false)));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn quantified_evaluation() {
        let s = parse_sentence("forall x exists y: E(x,y)").unwrap();
        let lits: LiteralSet = [(0, 1, true), (1, 0, true), (0, 0, false), (1, 1, false)]
            .into_iter()
            .map(|(a, b, p)| GroundLiteral::new(PredId(0), GroundArgs::Two(a, b), p))
            .collect();
        assert_eq!(evaluate(s.formula(), &Binding::default(), &lits, 2), Ok(true));
        assert_eq!(
            evaluate(s.formula(), &Binding::default(), &LiteralSet::new(), 0),
            Ok(true)
        );
    }
}
