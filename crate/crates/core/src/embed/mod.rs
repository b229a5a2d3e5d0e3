//! Embeddings, isomorphism, sibling census and age comparison.

mod canon;
mod census;
mod refine;
mod search;

pub use canon::{canonical_form, CanonicalKey, EXACT_CANON_LIMIT};
pub use census::{census, CensusBlock, CensusPartition};
pub use refine::{histogram, refine_colors};
pub use search::{validate_map, EmbeddingWitness, SearchConfig, DEFAULT_TIME_GUARD, TIME_GUARD_ENV};

use std::collections::BTreeSet;

use itertools::Itertools;

use crate::cliques;
use crate::error::{Error, Result};
use crate::mutalg;
use crate::par;
use crate::structure::{Element, Structure};
use search::Mode;

fn degree_multiset(s: &Structure) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = (0..s.size()).map(|e| s.degree_vector(e)).collect();
    v.sort();
    v
}

fn fact_counts(s: &Structure) -> Vec<usize> {
    s.signature().ids().map(|r| s.fact_count(r)).collect()
}

/// Searches for an embedding of `a` into `b`.
pub fn find_embedding(a: &Structure, b: &Structure) -> Result<Option<EmbeddingWitness>> {
    find_embedding_with(a, b, &SearchConfig::default())
}

pub fn find_embedding_with(a: &Structure, b: &Structure, cfg: &SearchConfig) -> Result<Option<EmbeddingWitness>> {
    a.signature().check_same(b.signature())?;
    // An embedding between equal-size finite structures is onto, so it must
    // carry facts and degree profiles bijectively.
    if a.size() == b.size() && (fact_counts(a) != fact_counts(b) || degree_multiset(a) != degree_multiset(b)) {
        return Ok(None);
    }
    search::run(a, b, Mode::Embed, cfg)
}

/// Reasons two structures cannot be isomorphic, cheapest first; `None` if all
/// invariants agree.
pub fn invariant_mismatch(a: &Structure, b: &Structure) -> Result<Option<&'static str>> {
    a.signature().check_same(b.signature())?;
    if a.size() != b.size() {
        return Ok(Some("universe size"));
    }
    if fact_counts(a) != fact_counts(b) {
        return Ok(Some("fact counts"));
    }
    let colors = refine_colors(&[a, b]);
    if histogram(&colors[0]) != histogram(&colors[1]) {
        return Ok(Some("refined color histogram"));
    }
    let sizes = |s: &Structure| {
        let mut v: Vec<usize> = mutalg::ma_components(s).iter().map(Vec::len).collect();
        v.sort_unstable();
        v
    };
    if sizes(a) != sizes(b) {
        return Ok(Some("component sizes"));
    }
    if cliques::clique_size_census(a, 1, None)? != cliques::clique_size_census(b, 1, None)? {
        return Ok(Some("maximal 1-clique sizes"));
    }
    Ok(None)
}

/// A bijective witness if `a ≅ b`.
pub fn is_isomorphic(a: &Structure, b: &Structure) -> Result<Option<EmbeddingWitness>> {
    is_isomorphic_with(a, b, &SearchConfig::default())
}

pub fn is_isomorphic_with(a: &Structure, b: &Structure, cfg: &SearchConfig) -> Result<Option<EmbeddingWitness>> {
    if invariant_mismatch(a, b)?.is_some() {
        return Ok(None);
    }
    search::run(a, b, Mode::Iso, cfg)
}

/// Isomorphism by search alone, without the invariant fast-fail.
pub fn is_isomorphic_unpruned(a: &Structure, b: &Structure, cfg: &SearchConfig) -> Result<Option<EmbeddingWitness>> {
    search::run(a, b, Mode::Iso, cfg)
}

pub const AGE_GUARD: usize = 5;

/// Exact isomorphism types of all induced substructures of size `1..=s`.
pub fn age_up_to(m: &Structure, s: usize) -> Result<BTreeSet<String>> {
    if s > AGE_GUARD {
        return Err(Error::GuardExceeded(format!("age size {s} exceeds guard {AGE_GUARD}")));
    }
    let subsets: Vec<Vec<Element>> = (1..=s.min(m.size())).flat_map(|len| (0..m.size()).combinations(len)).collect();
    let keys = par::map(&subsets, |sub| {
        let piece = m.induced_substructure(sub).expect("subset is in range");
        match canonical_form(&piece) {
            CanonicalKey::Exact(text) => text,
            CanonicalKey::Invariant(_) => unreachable!("age pieces are below the exact limit"),
        }
    });
    Ok(keys.into_iter().collect())
}

/// Every induced substructure of either side with at most `s` elements embeds
/// into the other.
pub fn same_age_up_to(a: &Structure, b: &Structure, s: usize) -> Result<bool> {
    if s == 0 {
        return Err(Error::Precondition("age size must be at least 1".into()));
    }
    a.signature().check_same(b.signature())?;
    Ok(age_up_to(a, s)? == age_up_to(b, s)?)
}
