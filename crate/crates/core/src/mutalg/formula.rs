//! Quantifier-free conjunctions: `E(x,y) & !P(x) & x!=y & y!=3`.
//!
//! Variables are identifiers in argument position, numbered by first
//! occurrence; integers denote concrete elements. `x=x` and `x=3` are also
//! accepted.

use std::fmt;

use crate::error::{Error, Result};
use crate::structure::{Element, RelId, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Elem(Element),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Atom { rel: String, args: Vec<Term>, negated: bool },
    Eq(Term, Term),
    Neq(Term, Term),
}

impl Literal {
    fn vars(&self) -> Vec<usize> {
        let terms: Vec<Term> = match self {
            Literal::Atom { args, .. } => args.clone(),
            Literal::Eq(a, b) | Literal::Neq(a, b) => vec![*a, *b],
        };
        terms
            .into_iter()
            .filter_map(|t| match t {
                Term::Var(v) => Some(v),
                Term::Elem(_) => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QfConjunction {
    pub vars: Vec<String>,
    pub literals: Vec<Literal>,
}

fn err(pos: usize, msg: impl fmt::Display) -> Error {
    Error::Formula(format!("at offset {pos}: {msg}"))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: Vec<String>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(err(self.pos, format!("expected `{s}`")))
        }
    }

    fn word(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.src.len() - start);
        if len == 0 {
            return Err(err(start, "expected a name or an element"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn term(&mut self) -> Result<Term> {
        let start = self.pos;
        let w = self.word()?.to_string();
        if w.bytes().all(|b| b.is_ascii_digit()) {
            return w.parse().map(Term::Elem).map_err(|_| err(start, "element too large"));
        }
        if !w.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return Err(err(start, format!("bad variable `{w}`")));
        }
        let id = match self.vars.iter().position(|v| *v == w) {
            Some(i) => i,
            None => {
                self.vars.push(w);
                self.vars.len() - 1
            }
        };
        Ok(Term::Var(id))
    }

    fn literal(&mut self) -> Result<Literal> {
        let negated = self.eat("!");
        let save = self.pos;
        let head = self.word()?.to_string();
        if self.peek() == Some('(') {
            self.expect("(")?;
            let mut args = vec![self.term()?];
            while self.eat(",") {
                args.push(self.term()?);
            }
            self.expect(")")?;
            return Ok(Literal::Atom { rel: head, args, negated });
        }
        if negated {
            return Err(err(save, "`!` must precede an atom"));
        }
        self.pos = save;
        let lhs = self.term()?;
        if self.eat("!=") {
            Ok(Literal::Neq(lhs, self.term()?))
        } else if self.eat("=") {
            Ok(Literal::Eq(lhs, self.term()?))
        } else {
            Err(err(self.pos, "expected `(`, `=` or `!=`"))
        }
    }
}

impl QfConjunction {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser { src, pos: 0, vars: Vec::new() };
        if p.peek().is_none() {
            return Err(err(0, "empty formula"));
        }
        let mut literals = vec![p.literal()?];
        while p.eat("&") {
            literals.push(p.literal()?);
        }
        if p.peek().is_some() {
            return Err(err(p.pos, "trailing input"));
        }
        if p.vars.is_empty() {
            return Err(err(0, "formula has no variables"));
        }
        Ok(QfConjunction { vars: p.vars, literals })
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// Resolves relation names against `m` and checks arities and elements.
    pub fn check(&self, m: &Structure) -> Result<Vec<Option<RelId>>> {
        let mut out = Vec::new();
        for lit in &self.literals {
            let terms: Vec<Term> = match lit {
                Literal::Atom { rel, args, .. } => {
                    let id = m.signature().id(rel)?;
                    if m.signature().arity(id) != args.len() {
                        return Err(Error::ArityMismatch {
                            name: rel.clone(),
                            expected: m.signature().arity(id),
                            found: args.len(),
                        });
                    }
                    out.push(Some(id));
                    args.clone()
                }
                Literal::Eq(a, b) | Literal::Neq(a, b) => {
                    out.push(None);
                    vec![*a, *b]
                }
            };
            for t in terms {
                if let Term::Elem(e) = t {
                    m.check_element(e)?;
                }
            }
        }
        Ok(out)
    }

    /// Literal indices grouped by the position (in `order`) of their last variable.
    pub(crate) fn schedule(&self, order: &[usize]) -> Vec<Vec<usize>> {
        let mut rank = vec![0; self.vars.len()];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let mut at = vec![Vec::new(); self.vars.len()];
        for (i, lit) in self.literals.iter().enumerate() {
            let last = lit.vars().into_iter().map(|v| rank[v]).max().unwrap_or(0);
            at[last].push(i);
        }
        at
    }

    /// Truth of literal `i` under a (sufficiently complete) assignment.
    pub(crate) fn eval(&self, m: &Structure, rels: &[Option<RelId>], i: usize, assign: &[Element]) -> bool {
        let val = |t: &Term| match *t {
            Term::Var(v) => assign[v],
            Term::Elem(e) => e,
        };
        match &self.literals[i] {
            Literal::Atom { args, negated, .. } => {
                let tuple: Vec<Element> = args.iter().map(val).collect();
                m.holds(rels[i].expect("atom has a relation"), &tuple) != *negated
            }
            Literal::Eq(a, b) => val(a) == val(b),
            Literal::Neq(a, b) => val(a) != val(b),
        }
    }
}

impl fmt::Display for QfConjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |t: &Term| match *t {
            Term::Var(v) => self.vars[v].clone(),
            Term::Elem(e) => e.to_string(),
        };
        let parts: Vec<String> = self
            .literals
            .iter()
            .map(|lit| match lit {
                Literal::Atom { rel, args, negated } => {
                    let args: Vec<String> = args.iter().map(term).collect();
                    format!("{}{rel}({})", if *negated { "!" } else { "" }, args.join(","))
                }
                Literal::Eq(a, b) => format!("{}={}", term(a), term(b)),
                Literal::Neq(a, b) => format!("{}!={}", term(a), term(b)),
            })
            .collect();
        f.write_str(&parts.join(" & "))
    }
}
