//! Canonical keys for isomorphism classes.

use itertools::Itertools;

use super::refine::{histogram, refine_colors};
use crate::structure::{serialize_structure, RelId, Structure};

/// Structures up to this size get an exact canonical form.
pub const EXACT_CANON_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CanonicalKey {
    /// Lexicographically least relabeled serialization over all permutations;
    /// equal keys ⟺ isomorphic.
    Exact(String),
    /// Isomorphism-invariant summary for larger structures; equal keys do not
    /// imply isomorphism.
    Invariant(String),
}

impl CanonicalKey {
    pub fn is_exact(&self) -> bool {
        matches!(self, CanonicalKey::Exact(_))
    }
}

fn relabeled_facts(s: &Structure, perm: &[usize]) -> Vec<(RelId, Vec<usize>)> {
    let mut v: Vec<(RelId, Vec<usize>)> =
        s.facts().iter().map(|f| (f.rel, f.args.iter().map(|&e| perm[e]).collect())).collect();
    v.sort();
    v
}

pub fn canonical_form(s: &Structure) -> CanonicalKey {
    let n = s.size();
    if n <= EXACT_CANON_LIMIT {
        let best = (0..n).permutations(n).map(|perm| relabeled_facts(s, &perm)).min().unwrap_or_default();
        let canon = Structure::new(s.signature().clone(), n, best).expect("relabeling preserves validity");
        return CanonicalKey::Exact(serialize_structure(&canon));
    }
    let counts: Vec<usize> = s.signature().ids().map(|r| s.fact_count(r)).collect();
    let hist = histogram(&refine_colors(&[s])[0]);
    CanonicalKey::Invariant(format!("n={n};facts={counts:?};colors={hist:?}"))
}
