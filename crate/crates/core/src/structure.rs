//! Dense finite structures: a truth value for every ground atom over a
//! domain `{0, .., n - 1}`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::formula::{Arity, GroundArgs, GroundAtom, GroundLiteral, Interpretation, PredId, Vocabulary};

/// A total structure. Ordering compares arities, domain size and then truth
/// values, so two structures over the same vocabulary compare by content.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Structure {
    arities: Vec<Arity>,
    n: u32,
    values: Vec<Vec<bool>>,
}

impl Structure {
    /// The structure with every atom false.
    pub fn empty(arities: Vec<Arity>, n: u32) -> Self {
        let values = arities
            .iter()
            .map(|a| match a {
                Arity::Unary => vec![false; n as usize],
                Arity::Binary => vec![false; (n as usize) * (n as usize)],
            })
            .collect();
        Structure { arities, n, values }
    }

    pub fn for_vocabulary(vocabulary: &Vocabulary, n: u32) -> Self {
        Self::empty(vocabulary.predicates().iter().map(|p| p.arity).collect(), n)
    }

    pub fn domain_size(&self) -> u32 {
        self.n
    }

    pub fn arities(&self) -> &[Arity] {
        &self.arities
    }

    fn slot(&self, args: GroundArgs) -> usize {
        match args {
            GroundArgs::One(a) => a as usize,
            GroundArgs::Two(a, b) => (a as usize) * (self.n as usize) + b as usize,
        }
    }

    pub fn get(&self, pred: PredId, args: GroundArgs) -> bool {
        self.values[pred.index()][self.slot(args)]
    }

    pub fn set(&mut self, pred: PredId, args: GroundArgs, value: bool) {
        let s = self.slot(args);
        self.values[pred.index()][s] = value;
    }

    pub fn unary(&self, pred: PredId, a: u32) -> bool {
        self.values[pred.index()][a as usize]
    }

    pub fn binary(&self, pred: PredId, a: u32, b: u32) -> bool {
        self.values[pred.index()][(a as usize) * (self.n as usize) + b as usize]
    }

    /// Every ground atom in a fixed order: predicate-major, then arguments
    /// lexicographically.
    pub fn atoms(&self) -> impl Iterator<Item = GroundAtom> + '_ {
        let n = self.n;
        self.arities.iter().enumerate().flat_map(move |(p, a)| {
            let pred = PredId(p as u32);
            let count = match a {
                Arity::Unary => n,
                Arity::Binary => n * n,
            };
            let arity = *a;
            (0..count).map(move |i| GroundAtom {
                pred,
                args: match arity {
                    Arity::Unary => GroundArgs::One(i),
                    Arity::Binary => GroundArgs::Two(i / n, i % n),
                },
            })
        })
    }

    pub fn positive_atoms(&self) -> impl Iterator<Item = GroundAtom> + '_ {
        self.atoms().filter(|a| self.get(a.pred, a.args))
    }

    pub fn literals(&self) -> impl Iterator<Item = GroundLiteral> + '_ {
        self.atoms().map(|a| GroundLiteral {
            atom: a,
            positive: self.get(a.pred, a.args),
        })
    }

    /// Drops every predicate with index `>= len`.
    pub fn restrict(&self, len: usize) -> Structure {
        Structure {
            arities: self.arities[..len].to_vec(),
            n: self.n,
            values: self.values[..len].to_vec(),
        }
    }

    /// Positive atoms rendered as `E(e1,e2)`, sorted.
    pub fn render_atoms(&self, vocabulary: &Vocabulary) -> Vec<String> {
        let mut out: Vec<String> = self.positive_atoms().map(|a| render_atom(vocabulary, &a)).collect();
        out.sort();
        out
    }
}

pub fn render_atom(vocabulary: &Vocabulary, atom: &GroundAtom) -> String {
    let name = vocabulary.name(atom.pred);
    match atom.args {
        GroundArgs::One(a) => format!("{name}(e{})", a + 1),
        GroundArgs::Two(a, b) => format!("{name}(e{},e{})", a + 1, b + 1),
    }
}

impl Interpretation for Structure {
    fn value(&self, pred: PredId, args: GroundArgs) -> Option<bool> {
        Some(self.get(pred, args))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_and_rendering() {
        let mut v = Vocabulary::new();
        let p = v.add("P", Arity::Unary).unwrap();
        let e = v.add("E", Arity::Binary).unwrap();
        let mut s = Structure::for_vocabulary(&v, 2);
        assert_eq!(s.atoms().count(), 2 + 4);
        s.set(e, GroundArgs::Two(0, 1), true);
        s.set(p, GroundArgs::One(1), true);
        assert_eq!(s.render_atoms(&v), ["E(e1,e2)", "P(e2)"]);
        assert_eq!(s.restrict(1).render_atoms(&v), ["P(e2)"]);
        assert_eq!(s.literals().filter(|l| l.positive).count(), 2);
    }
}
