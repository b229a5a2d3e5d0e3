//! Finite relational structures on the universe `0..n`.

mod signature;
mod text;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

pub use signature::{RelId, Relation, Signature};
pub use text::{parse_structure, serialize_structure};

use crate::error::{Error, Result};

pub type Element = usize;

/// An ordered tuple of elements.
pub type Tuple = Vec<Element>;

/// True iff the entries are pairwise distinct, i.e. the tuple lives in `M^(k)`.
pub fn is_distinct(t: &[Element]) -> bool {
    t.iter().enumerate().all(|(i, x)| !t[..i].contains(x))
}

pub fn disjoint(a: &[Element], b: &[Element]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    pub rel: RelId,
    pub args: Box<[Element]>,
}

impl Fact {
    /// True iff some entry repeats (a loop in graph terms).
    pub fn has_repeats(&self) -> bool {
        !is_distinct(&self.args)
    }
}

/// A finite relational structure. Immutable once built.
#[derive(Clone)]
pub struct Structure {
    signature: Signature,
    size: usize,
    facts: Vec<Fact>,
    lookup: Vec<HashSet<Box<[Element]>>>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.signature == other.signature && self.facts == other.facts
    }
}

impl Eq for Structure {}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_structure(self))
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_structure(self))
    }
}

impl serde::Serialize for Structure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&serialize_structure(self))
    }
}

impl Structure {
    pub fn new<I>(signature: Signature, size: usize, facts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (RelId, Tuple)>,
    {
        let mut set = BTreeSet::new();
        for (rel, args) in facts {
            if rel.0 >= signature.len() {
                return Err(Error::UnknownRelation(format!("#{}", rel.0)));
            }
            let arity = signature.arity(rel);
            if args.len() != arity {
                return Err(Error::ArityMismatch {
                    name: signature.name(rel).to_string(),
                    expected: arity,
                    found: args.len(),
                });
            }
            if let Some(&bad) = args.iter().find(|&&e| e >= size) {
                return Err(Error::ElementOutOfRange { element: bad, size });
            }
            set.insert(Fact { rel, args: args.into_boxed_slice() });
        }
        Ok(Self::from_sorted(signature, size, set.into_iter().collect()))
    }

    /// Builds from named facts, e.g. `[("E", vec![0, 1])]`.
    pub fn from_named<'a, I>(signature: Signature, size: usize, facts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Tuple)>,
    {
        let mut resolved = Vec::new();
        for (name, args) in facts {
            resolved.push((signature.id(name)?, args));
        }
        Self::new(signature, size, resolved)
    }

    pub fn empty(signature: Signature, size: usize) -> Self {
        Self::from_sorted(signature, size, Vec::new())
    }

    fn from_sorted(signature: Signature, size: usize, facts: Vec<Fact>) -> Self {
        let mut lookup = vec![HashSet::new(); signature.len()];
        let mut incidence = vec![Vec::new(); size];
        for (id, fact) in facts.iter().enumerate() {
            lookup[fact.rel.0].insert(fact.args.clone());
            let mut seen: Vec<Element> = Vec::with_capacity(fact.args.len());
            for &e in fact.args.iter() {
                if !seen.contains(&e) {
                    seen.push(e);
                    incidence[e].push(id);
                }
            }
        }
        Structure { signature, size, facts, lookup, incidence }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn fact(&self, id: usize) -> &Fact {
        &self.facts[id]
    }

    pub fn facts_of(&self, rel: RelId) -> impl Iterator<Item = &Fact> {
        self.facts.iter().filter(move |f| f.rel == rel)
    }

    pub fn fact_count(&self, rel: RelId) -> usize {
        self.lookup[rel.0].len()
    }

    /// Ids of the facts that mention `e`, each listed once.
    pub fn incident(&self, e: Element) -> &[usize] {
        &self.incidence[e]
    }

    pub fn holds(&self, rel: RelId, args: &[Element]) -> bool {
        self.lookup[rel.0].contains(args)
    }

    pub fn holds_named(&self, name: &str, args: &[Element]) -> Result<bool> {
        Ok(self.holds(self.signature.id(name)?, args))
    }

    pub fn check_element(&self, e: Element) -> Result<()> {
        if e < self.size {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { element: e, size: self.size })
        }
    }

    pub fn check_elements(&self, es: &[Element]) -> Result<()> {
        es.iter().try_for_each(|&e| self.check_element(e))
    }

    /// Applies a relabeling `perm[old] = new` to every fact; `perm` must be a
    /// permutation of the universe.
    pub fn relabel(&self, perm: &[Element]) -> Structure {
        assert_eq!(perm.len(), self.size);
        let facts = self.facts.iter().map(|f| (f.rel, f.args.iter().map(|&e| perm[e]).collect::<Tuple>()));
        Structure::new(self.signature.clone(), self.size, facts).expect("relabeling preserves validity")
    }

    /// Checks whether the permutation `perm` (given as a full map) is an
    /// automorphism. Only facts touching `support` (the moved points) need to be
    /// inspected: every other fact is fixed, and a bijection mapping the finite
    /// fact set into itself maps it onto itself.
    pub fn is_automorphism_on(&self, perm: &[Element], support: &[Element]) -> bool {
        self.first_broken_fact(perm, support).is_none()
    }

    pub fn is_automorphism(&self, perm: &[Element]) -> bool {
        let support: Vec<Element> = (0..self.size).filter(|&e| perm[e] != e).collect();
        self.is_automorphism_on(perm, &support)
    }

    /// A fact whose image under `perm` is not a fact, if any.
    pub fn first_broken_fact(&self, perm: &[Element], support: &[Element]) -> Option<&Fact> {
        let mut buf = Vec::new();
        for &e in support {
            for &id in &self.incidence[e] {
                let fact = &self.facts[id];
                buf.clear();
                buf.extend(fact.args.iter().map(|&x| perm[x]));
                if !self.holds(fact.rel, &buf) {
                    return Some(fact);
                }
            }
        }
        None
    }

    /// Facts all of whose entries satisfy `keep`.
    pub fn facts_within<'a>(&'a self, keep: &'a [bool]) -> impl Iterator<Item = &'a Fact> + 'a {
        self.facts.iter().filter(move |f| f.args.iter().all(|&e| keep[e]))
    }

    /// Substructure on `domain`, relabeled to `0..|domain|` in increasing element order.
    pub fn induced_substructure(&self, domain: &[Element]) -> Result<Structure> {
        self.check_elements(domain)?;
        let carrier: BTreeSet<Element> = domain.iter().copied().collect();
        let mut new_id = vec![usize::MAX; self.size];
        for (i, &e) in carrier.iter().enumerate() {
            new_id[e] = i;
        }
        let facts = self
            .facts
            .iter()
            .filter(|f| f.args.iter().all(|&e| new_id[e] != usize::MAX))
            .map(|f| (f.rel, f.args.iter().map(|&e| new_id[e]).collect::<Tuple>()));
        Structure::new(self.signature.clone(), carrier.len(), facts)
    }

    /// Disjoint union; `other`'s elements are shifted by `self.size()`.
    pub fn disjoint_union(&self, other: &Structure) -> Result<Structure> {
        self.signature.check_same(&other.signature)?;
        let shift = self.size;
        let facts = self
            .facts
            .iter()
            .map(|f| (f.rel, f.args.to_vec()))
            .chain(other.facts.iter().map(|f| (f.rel, f.args.iter().map(|&e| e + shift).collect())));
        Structure::new(self.signature.clone(), self.size + other.size, facts)
    }

    /// Per-relation, per-position occurrence counts of `e`, over facts of `self`.
    pub fn degree_vector(&self, e: Element) -> Vec<usize> {
        let offsets = self.position_offsets();
        let mut v = vec![0; *offsets.last().unwrap_or(&0)];
        for &id in &self.incidence[e] {
            let f = &self.facts[id];
            for (p, &x) in f.args.iter().enumerate() {
                if x == e {
                    v[offsets[f.rel.0] + p] += 1;
                }
            }
        }
        v
    }

    fn position_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.signature.len() + 1);
        let mut acc = 0;
        for r in self.signature.relations() {
            offsets.push(acc);
            acc += r.arity;
        }
        offsets.push(acc);
        offsets
    }
}

/// Disjoint union of a list of structures sharing one signature.
pub fn disjoint_union_all(signature: &Signature, parts: &[Structure]) -> Result<Structure> {
    parts.iter().try_fold(Structure::empty(signature.clone(), 0), |acc, p| acc.disjoint_union(p))
}
