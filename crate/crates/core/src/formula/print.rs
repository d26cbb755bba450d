use core::fmt;

use super::{Args, Formula, Vocabulary};

/// Prints a formula in the parser's surface syntax. Every compound node is
/// parenthesized, so the output re-parses to the same tree.
pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    vocabulary: &'a Vocabulary,
}

impl<'a> FormulaDisplay<'a> {
    pub(super) fn new(formula: &'a Formula, vocabulary: &'a Vocabulary) -> Self {
        FormulaDisplay { formula, vocabulary }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Formula) -> fmt::Result {
        let bin = |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula| -> fmt::Result {
            f.write_str("(")?;
            self.write(f, a)?;
            write!(f, " {op} ")?;
            self.write(f, b)?;
            f.write_str(")")
        };
        match node {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(p, Args::One(v)) => write!(f, "{}({v})", self.vocabulary.name(*p)),
            Formula::Atom(p, Args::Two(a, b)) => write!(f, "{}({a},{b})", self.vocabulary.name(*p)),
            Formula::Eq(a, b) => write!(f, "({a} = {b})"),
            Formula::Not(g) => {
                f.write_str("~")?;
                self.write(f, g)
            }
            Formula::And(a, b) => bin(f, a, "&", b),
            Formula::Or(a, b) => bin(f, a, "|", b),
            Formula::Implies(a, b) => bin(f, a, "->", b),
            Formula::Iff(a, b) => bin(f, a, "<->", b),
            Formula::Forall(v, g) => {
                write!(f, "(forall {v}: ")?;
                self.write(f, g)?;
                f.write_str(")")
            }
            Formula::Exists(v, g) => {
                write!(f, "(exists {v}: ")?;
                self.write(f, g)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula)
    }
}
