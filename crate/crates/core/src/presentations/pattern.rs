//! Fact patterns and the JSON encoding of languages and finite structures.
//!
//! A pattern is written like a fact line, `REL tok tok ...`, where each token
//! names a slot:
//!
//! | token | meaning |
//! |-------|---------|
//! | `k3`  | base element 3 |
//! | `p0`  | position 0 of the current member |
//! | `x0`, `y1` | positions of the first / second member of an ordered pair |
//! | `w0`  | position 0 of a grid witness tuple |
//! | `m0`  | position 0 of the first member of a grid clique |
//! | `d0`  | position 0 of the grid separating tuple |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::structure::{Element, RelId, Signature, Structure, Tuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Token {
    Base(Element),
    Pos(usize),
    First(usize),
    Second(usize),
    Witness(usize),
    Anchor(usize),
    Sep(usize),
}

impl Token {
    fn letter(self) -> char {
        match self {
            Token::Base(_) => 'k',
            Token::Pos(_) => 'p',
            Token::First(_) => 'x',
            Token::Second(_) => 'y',
            Token::Witness(_) => 'w',
            Token::Anchor(_) => 'm',
            Token::Sep(_) => 'd',
        }
    }

    fn index(self) -> usize {
        match self {
            Token::Base(i)
            | Token::Pos(i)
            | Token::First(i)
            | Token::Second(i)
            | Token::Witness(i)
            | Token::Anchor(i)
            | Token::Sep(i) => i,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter(), self.index())
    }
}

impl FromStr for Token {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Presentation(format!("bad slot token `{s}`"));
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(bad)?;
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let i: usize = digits.parse().map_err(|_| bad())?;
        Ok(match letter {
            'k' => Token::Base(i),
            'p' => Token::Pos(i),
            'x' => Token::First(i),
            'y' => Token::Second(i),
            'w' => Token::Witness(i),
            'm' => Token::Anchor(i),
            'd' => Token::Sep(i),
            _ => return Err(bad()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Pattern {
    pub rel: String,
    pub args: Vec<Token>,
}

impl Pattern {
    pub fn new(rel: &str, args: Vec<Token>) -> Self {
        Pattern { rel: rel.to_string(), args }
    }

    /// Resolves every token through `slot`; a token the context does not
    /// allow must map to `Err`.
    pub fn instantiate(
        &self,
        sig: &Signature,
        mut slot: impl FnMut(Token) -> Result<Element>,
    ) -> Result<(RelId, Tuple)> {
        let rel = sig.id(&self.rel)?;
        if sig.arity(rel) != self.args.len() {
            return Err(Error::ArityMismatch {
                name: self.rel.clone(),
                expected: sig.arity(rel),
                found: self.args.len(),
            });
        }
        let args = self.args.iter().map(|&t| slot(t)).collect::<Result<Tuple>>()?;
        Ok((rel, args))
    }

    pub fn mentions(&self, pred: impl Fn(Token) -> bool) -> bool {
        self.args.iter().any(|&t| pred(t))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rel)?;
        for t in &self.args {
            write!(f, " {t}")?;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let rel = parts.next().ok_or_else(|| Error::Presentation("empty fact pattern".into()))?.to_string();
        let args = parts.map(str::parse).collect::<Result<Vec<Token>>>()?;
        if args.is_empty() {
            return Err(Error::Presentation(format!("pattern `{s}` has no arguments")));
        }
        Ok(Pattern { rel, args })
    }
}

impl TryFrom<String> for Token {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Token> for String {
    fn from(t: Token) -> String {
        t.to_string()
    }
}

impl TryFrom<String> for Pattern {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Pattern> for String {
    fn from(p: Pattern) -> String {
        p.to_string()
    }
}

/// Reject tokens outside `allowed` or with out-of-range indices.
pub(crate) fn check_tokens(patterns: &[Pattern], what: &str, allowed: impl Fn(Token) -> Option<usize>) -> Result<()> {
    for p in patterns {
        for &t in &p.args {
            match allowed(t) {
                Some(bound) if t.index() < bound => {}
                Some(bound) => {
                    return Err(Error::Presentation(format!("{what}: token `{t}` in `{p}` out of range (< {bound})")))
                }
                None => return Err(Error::Presentation(format!("{what}: token `{t}` not allowed in `{p}`"))),
            }
        }
    }
    Ok(())
}

/// Signature given as `["E/2", "P/1"]`.
pub fn parse_language(decls: &[String]) -> Result<Signature> {
    let mut rels = Vec::new();
    for d in decls {
        let (name, arity) =
            d.split_once('/').ok_or_else(|| Error::Presentation(format!("expected NAME/ARITY, found `{d}`")))?;
        let arity: usize = arity.parse().map_err(|_| Error::Presentation(format!("bad arity in `{d}`")))?;
        rels.push((name.to_string(), arity));
    }
    Signature::new(rels)
}

pub fn language_of(sig: &Signature) -> Vec<String> {
    sig.relations().iter().map(|r| format!("{}/{}", r.name, r.arity)).collect()
}

/// A finite structure inside a presentation document; the language is shared.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    pub universe: usize,
    #[serde(default)]
    pub facts: Vec<String>,
}

impl StructureSpec {
    pub fn build(&self, sig: &Signature) -> Result<Structure> {
        let mut facts = Vec::new();
        for line in &self.facts {
            let mut parts = line.split_whitespace();
            let name = parts.next().ok_or_else(|| Error::Presentation("empty fact line".into()))?;
            let args = parts
                .map(|p| p.parse::<usize>().map_err(|_| Error::Presentation(format!("bad element in `{line}`"))))
                .collect::<Result<Tuple>>()?;
            facts.push((sig.id(name)?, args));
        }
        Structure::new(sig.clone(), self.universe, facts)
    }

    pub fn of(s: &Structure) -> Self {
        let facts = s
            .facts()
            .iter()
            .map(|f| {
                let mut line = s.signature().name(f.rel).to_string();
                for a in f.args.iter() {
                    line.push(' ');
                    line.push_str(&a.to_string());
                }
                line
            })
            .collect();
        StructureSpec { universe: s.size(), facts }
    }
}
