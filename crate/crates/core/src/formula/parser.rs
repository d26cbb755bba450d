//! Recursive-descent parser for sentence text.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! sentence := iff
//! iff      := imp ("<->" imp)*
//! imp      := or ("->" imp)?
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "~" unary | quant | "(" iff ")" | "true" | "false"
//!           | var "=" var | var "!=" var | NAME "(" var ("," var)? ")"
//! quant    := ("forall" | "exists") var ":"? iff
//! var      := "x" | "y"
//! ```
//!
//! A quantifier body extends to the right as far as possible, except that it
//! stops before an unparenthesized `&` whose right operand starts with a
//! quantifier keyword. So `forall x: A(x) & forall y: B(y)` reads as two
//! quantified conjuncts. Use parentheses when in doubt. `#` starts a line
//! comment.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Args, Arity, Formula, FormulaError, Sentence, Var, Vocabulary};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eq,
    Neq,
    Forall,
    Exists,
    True,
    False,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_quantifier(&self) -> bool {
        matches!(self, Tok::Forall | Tok::Exists)
    }
}

fn syntax(pos: usize, message: impl Into<String>) -> FormulaError {
    FormulaError::Syntax {
        pos,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b',' => out.push((Tok::Comma, start)),
            b':' => out.push((Tok::Colon, start)),
            b'~' => out.push((Tok::Not, start)),
            b'&' => out.push((Tok::And, start)),
            b'|' => out.push((Tok::Or, start)),
            b'=' => out.push((Tok::Eq, start)),
            b'!' if bytes.get(i + 1) == Some(&b'=') => {
                out.push((Tok::Neq, start));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((Tok::Implies, start));
                i += 1;
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                out.push((Tok::Iff, start));
                i += 2;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "forall" => Tok::Forall,
                    "exists" => Tok::Exists,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((tok, start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vocab: Vocabulary,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        let i = (self.at + 1).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), FormulaError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {} but found {}", want.describe(), self.peek().describe()),
            ))
        }
    }

    fn iff(&mut self, stop: bool) -> Result<Formula, FormulaError> {
        let mut lhs = self.imp(stop)?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp(stop)?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self, stop: bool) -> Result<Formula, FormulaError> {
        let lhs = self.or(stop)?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.imp(stop)?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self, stop: bool) -> Result<Formula, FormulaError> {
        let mut lhs = self.and(stop)?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and(stop)?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self, stop: bool) -> Result<Formula, FormulaError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            if stop && self.peek2().is_quantifier() {
                break;
            }
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn var(&mut self) -> Result<Var, FormulaError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(name) => match name.as_str() {
                "x" => Ok(Var::X),
                "y" => Ok(Var::Y),
                _ => Err(FormulaError::ThirdVariable { name, pos }),
            },
            other => Err(syntax(
                pos,
                format!("expected a variable but found {}", other.describe()),
            )),
        }
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let q = self.bump();
                let v = self.var()?;
                if *self.peek() == Tok::Colon {
                    self.bump();
                }
                let body = self.iff(true)?;
                Ok(if q == Tok::Forall {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.iff(false)?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(name) => {
                if *self.peek2() == Tok::LParen {
                    self.atom(name, pos)
                } else if matches!(self.peek2(), Tok::Eq | Tok::Neq) {
                    let a = self.var()?;
                    let negated = self.bump() == Tok::Neq;
                    let b = self.var()?;
                    self.vocab.set_equality_used(true);
                    let eq = Formula::Eq(a, b);
                    Ok(if negated { Formula::not(eq) } else { eq })
                } else {
                    Err(syntax(pos, format!("expected a formula but found `{name}`")))
                }
            }
            other => Err(syntax(
                pos,
                format!("expected a formula but found {}", other.describe()),
            )),
        }
    }

    fn atom(&mut self, name: String, pos: usize) -> Result<Formula, FormulaError> {
        self.bump();
        self.expect(Tok::LParen)?;
        let mut args = alloc::vec![self.var()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.var()?);
        }
        self.expect(Tok::RParen)?;
        let arity = match args.len() {
            1 => Arity::Unary,
            2 => Arity::Binary,
            k => {
                return Err(syntax(
                    pos,
                    format!("predicate `{name}` has {k} arguments; only arity 1 and 2 are supported"),
                ))
            }
        };
        let id = match self.vocab.lookup(&name) {
            Some(id) => {
                let declared = self.vocab.arity(id);
                if declared != arity {
                    return Err(FormulaError::ArityMismatch {
                        predicate: name,
                        expected: declared.count(),
                        found: arity.count(),
                    });
                }
                id
            }
            None => self.vocab.add(&name, arity)?,
        };
        Ok(Formula::Atom(
            id,
            match args.as_slice() {
                [a] => Args::One(*a),
                [a, b] => Args::Two(*a, *b),
                _ => unreachable!(),
            },
        ))
    }
}

/// Parses sentence text, inferring the vocabulary from first use of each
/// predicate.
pub fn parse_sentence(text: &str) -> Result<Sentence, FormulaError> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        vocab: Vocabulary::new(),
    };
    let formula = p.iff(false)?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(p.pos(), format!("unexpected {}", p.peek().describe())));
    }
    Sentence::new(p.vocab, formula)
}
