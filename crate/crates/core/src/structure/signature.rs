use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a relation inside its [`Signature`]. Relations are kept sorted by
/// name, so ids follow name order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
}

/// A finite relational language. Equality is built in and never declared.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    relations: Vec<Relation>,
    max_arity: usize,
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new<I, S>(relations: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut rels: Vec<Relation> = Vec::new();
        for (name, arity) in relations {
            let name = name.into();
            if !valid_name(&name) {
                return Err(Error::InvalidRelationName(name));
            }
            if arity == 0 {
                return Err(Error::Precondition(format!("relation `{name}` has arity 0")));
            }
            if rels.iter().any(|r| r.name == name) {
                return Err(Error::DuplicateRelation(name));
            }
            rels.push(Relation { name, arity });
        }
        rels.sort_by(|a, b| a.name.cmp(&b.name));
        let max_arity = rels.iter().map(|r| r.arity).max().unwrap_or(0);
        Ok(Signature { relations: rels, max_arity })
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    /// Maximal arity `r` of the language (0 for the empty language).
    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn ids(&self) -> impl Iterator<Item = RelId> {
        (0..self.relations.len()).map(RelId)
    }

    pub fn id(&self, name: &str) -> Result<RelId> {
        self.relations
            .iter()
            .position(|r| r.name == name)
            .map(RelId)
            .ok_or_else(|| Error::UnknownRelation(name.to_string()))
    }

    pub fn arity(&self, rel: RelId) -> usize {
        self.relations[rel.0].arity
    }

    pub fn name(&self, rel: RelId) -> &str {
        &self.relations[rel.0].name
    }

    pub(crate) fn check_same(&self, other: &Signature) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!("`{self}` vs `{other}`")))
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.relations.iter().map(|r| format!("{}/{}", r.name, r.arity)).collect();
        write!(f, "{}", parts.join(" "))
    }
}
