//! Exchangeability and k-cliques.
//!
//! Two disjoint tuples `a`, `b` are exchangeable when `a⌢b` and `b⌢a` have the
//! same type over the rest of the structure, equivalently when swapping them
//! pointwise is an automorphism. A k-clique is a nonempty set of pairwise
//! disjoint, pairwise exchangeable k-tuples.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::Serialize;

use crate::embed::refine_colors;
use crate::error::{Error, Result};
use crate::par;
use crate::qftype::{complement_mask, diagram_masked, mask, type_equal_masked, QfDiagram};
use crate::structure::{disjoint, is_distinct, Element, Structure, Tuple};

/// Default cap on `n!/(n-k)!` when the pool is all of `M^(k)`.
pub const DEFAULT_POOL_CAP: usize = 100_000;
/// Cap on the number of maximal cliques reported by one enumeration.
pub const DEFAULT_CLIQUE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliqueLimits {
    pub pool_cap: usize,
    pub clique_cap: usize,
}

impl Default for CliqueLimits {
    fn default() -> Self {
        CliqueLimits { pool_cap: DEFAULT_POOL_CAP, clique_cap: DEFAULT_CLIQUE_CAP }
    }
}

fn check_tuple(m: &Structure, t: &[Element]) -> Result<()> {
    m.check_elements(t)?;
    if !is_distinct(t) {
        return Err(Error::RepeatedEntries(t.to_vec()));
    }
    Ok(())
}

/// Exchangeability without argument checks; both routes must agree.
fn exchangeable_unchecked(m: &Structure, a: &[Element], b: &[Element]) -> Result<bool> {
    if !disjoint(a, b) {
        return Ok(false);
    }
    let ab: Tuple = a.iter().chain(b).copied().collect();
    let ba: Tuple = b.iter().chain(a).copied().collect();
    let by_type = type_equal_masked(m, &ab, &ba, &complement_mask(m.size(), &ab));
    let mut swap: Vec<Element> = (0..m.size()).collect();
    for (&x, &y) in a.iter().zip(b) {
        swap[x] = y;
        swap[y] = x;
    }
    let by_automorphism = m.is_automorphism_on(&swap, &ab);
    if by_type != by_automorphism {
        return Err(Error::Verification(format!(
            "exchangeability of {a:?} and {b:?}: type test {by_type}, swap test {by_automorphism}"
        )));
    }
    Ok(by_type)
}

/// `a ~ b`: disjoint, and `tp(a⌢b / M∖(a∪b)) = tp(b⌢a / M∖(a∪b))`.
pub fn exchangeable(m: &Structure, a: &[Element], b: &[Element]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    check_tuple(m, a)?;
    check_tuple(m, b)?;
    exchangeable_unchecked(m, a, b)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct KClique {
    pub k: usize,
    /// Sorted member tuples, orientation as given.
    pub members: Vec<Tuple>,
}

impl KClique {
    /// Builds and verifies a clique in `m`.
    pub fn new(m: &Structure, k: usize, members: impl IntoIterator<Item = Tuple>) -> Result<Self> {
        let mut members: Vec<Tuple> = members.into_iter().collect();
        members.sort();
        members.dedup();
        let c = KClique { k, members };
        c.verify(m)?;
        Ok(c)
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn carrier(&self) -> Vec<Element> {
        self.members.iter().flatten().copied().sorted().collect()
    }

    pub fn contains(&self, t: &[Element]) -> bool {
        self.members.binary_search_by(|x| x.as_slice().cmp(t)).is_ok()
    }

    /// Nonempty, members of length `k` with distinct entries, pairwise
    /// disjoint and pairwise exchangeable.
    pub fn verify(&self, m: &Structure) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Precondition("k must be at least 1".into()));
        }
        if self.members.is_empty() {
            return Err(Error::Verification("a clique has at least one member".into()));
        }
        for t in &self.members {
            if t.len() != self.k {
                return Err(Error::LengthMismatch(self.k, t.len()));
            }
            check_tuple(m, t)?;
        }
        let pairs: Vec<(usize, usize)> = (0..self.members.len()).tuple_combinations().collect();
        let broken = par::map(&pairs, |&(i, j)| -> Result<Option<(usize, usize)>> {
            let (a, b) = (&self.members[i], &self.members[j]);
            if !disjoint(a, b) {
                return Ok(Some((i, j)));
            }
            Ok((!exchangeable_unchecked(m, a, b)?).then_some((i, j)))
        });
        for b in broken {
            if let Some((i, j)) = b? {
                return Err(Error::Verification(format!(
                    "{:?} and {:?} are not disjoint and exchangeable",
                    self.members[i], self.members[j]
                )));
            }
        }
        Ok(())
    }

    pub fn is_clique_in(&self, m: &Structure) -> Result<bool> {
        match self.verify(m) {
            Ok(()) => Ok(true),
            Err(Error::Verification(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

fn falling_factorial(n: usize, k: usize) -> Option<usize> {
    (0..k).try_fold(1usize, |acc, i| acc.checked_mul(n.checked_sub(i)?))
}

fn bron_kerbosch(
    adj: &[FixedBitSet],
    r: &mut Vec<usize>,
    p: FixedBitSet,
    mut x: FixedBitSet,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if p.is_clear() && x.is_clear() {
        if out.len() >= cap {
            return Err(Error::GuardExceeded(format!("more than {cap} maximal cliques")));
        }
        out.push(r.clone());
        return Ok(());
    }
    let pivot = p
        .ones()
        .chain(x.ones())
        .max_by_key(|&u| (p.intersection(&adj[u]).count(), usize::MAX - u))
        .expect("P or X is nonempty");
    let mut todo = p.clone();
    todo.difference_with(&adj[pivot]);
    let mut p = p;
    for v in todo.ones() {
        r.push(v);
        let mut np = p.clone();
        np.intersect_with(&adj[v]);
        let mut nx = x.clone();
        nx.intersect_with(&adj[v]);
        bron_kerbosch(adj, r, np, nx, out, cap)?;
        r.pop();
        p.set(v, false);
        x.insert(v);
    }
    Ok(())
}

/// All maximal k-cliques whose members come from `pool` (default: every
/// distinct-entry k-tuple), in canonical order.
pub fn enumerate_maximal_kcliques(m: &Structure, k: usize, pool: Option<&[Tuple]>) -> Result<Vec<KClique>> {
    enumerate_maximal_kcliques_with(m, k, pool, &CliqueLimits::default())
}

pub fn enumerate_maximal_kcliques_with(
    m: &Structure,
    k: usize,
    pool: Option<&[Tuple]>,
    limits: &CliqueLimits,
) -> Result<Vec<KClique>> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let tuples: Vec<Tuple> = match pool {
        Some(p) => {
            for t in p {
                if t.len() != k {
                    return Err(Error::LengthMismatch(k, t.len()));
                }
                check_tuple(m, t)?;
            }
            p.iter().cloned().sorted().dedup().collect()
        }
        None => {
            let n = m.size();
            match falling_factorial(n, k) {
                Some(count) if count <= limits.pool_cap => (0..n).permutations(k).collect(),
                _ => {
                    return Err(Error::GuardExceeded(format!(
                        "{n}!/({n}-{k})! tuples exceed the pool cap {}; supply a pool",
                        limits.pool_cap
                    )))
                }
            }
        }
    };
    if tuples.is_empty() {
        return Ok(Vec::new());
    }

    // Exchangeable tuples are swapped by an automorphism, so they agree
    // coordinatewise on refined colors.
    let colors = &refine_colors(&[m])[0];
    let mut buckets: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for (i, t) in tuples.iter().enumerate() {
        buckets.entry(t.iter().map(|&e| colors[e]).collect()).or_default().push(i);
    }
    let buckets: Vec<Vec<usize>> = buckets.into_values().collect();

    let found = par::map(&buckets, |bucket| -> Result<Vec<Vec<usize>>> {
        let size = bucket.len();
        let mut adj = vec![FixedBitSet::with_capacity(size); size];
        for (i, j) in (0..size).tuple_combinations() {
            if exchangeable_unchecked(m, &tuples[bucket[i]], &tuples[bucket[j]])? {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
        let mut all = FixedBitSet::with_capacity(size);
        all.insert_range(..);
        let mut out = Vec::new();
        bron_kerbosch(&adj, &mut Vec::new(), all, FixedBitSet::with_capacity(size), &mut out, limits.clique_cap)?;
        Ok(out.into_iter().map(|c| c.into_iter().map(|i| bucket[i]).collect()).collect())
    });

    let mut cliques = Vec::new();
    for f in found {
        for members in f? {
            let mut members: Vec<Tuple> = members.into_iter().map(|i| tuples[i].clone()).collect();
            members.sort();
            cliques.push(KClique { k, members });
        }
        if cliques.len() > limits.clique_cap {
            return Err(Error::GuardExceeded(format!("more than {} maximal cliques", limits.clique_cap)));
        }
    }
    cliques.sort();
    Ok(cliques)
}

/// Sizes of all maximal k-cliques, largest first.
pub fn clique_size_census(m: &Structure, k: usize, pool: Option<&[Tuple]>) -> Result<Vec<usize>> {
    let mut sizes: Vec<usize> = enumerate_maximal_kcliques(m, k, pool)?.iter().map(KClique::size).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sizes)
}

/// Union of two cliques sharing a member whose private parts are disjoint.
pub fn meld(m: &Structure, a: &KClique, b: &KClique) -> Result<KClique> {
    if a.k != b.k {
        return Err(Error::LengthMismatch(a.k, b.k));
    }
    if !a.members.iter().any(|t| b.contains(t)) {
        return Err(Error::Precondition("cliques share no member".into()));
    }
    let only_a: Vec<Element> = a.members.iter().filter(|t| !b.contains(t)).flatten().copied().collect();
    let only_b: Vec<Element> = b.members.iter().filter(|t| !a.contains(t)).flatten().copied().collect();
    if !disjoint(&only_a, &only_b) {
        return Err(Error::Precondition("private members of the two cliques overlap".into()));
    }
    let union = KClique { k: a.k, members: a.members.iter().chain(&b.members).cloned().sorted().dedup().collect() };
    union.verify(m).map_err(|e| Error::Verification(format!("melded union is not a clique: {e}")))?;
    Ok(union)
}

/// `|A| > 2k + r`, with `k` the ambient tuple bound and `r` the maximal arity.
pub fn sufficiently_large(size: usize, k: usize, r: usize) -> bool {
    size > 2 * k + r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueExtension {
    pub structure: Structure,
    pub clique: KClique,
    /// The extended clique is sufficiently large, so preservation is guaranteed.
    pub large_enough: bool,
    /// Sufficiently large maximal k'-cliques (k' ≤ k) of the old structure re-verified in the new one.
    pub preserved_checked: usize,
    /// Those that failed to remain cliques (always 0 when `large_enough`).
    pub preserved_broken: usize,
    /// Values of k' skipped because the default pool exceeded its cap.
    pub skipped_k: Vec<usize>,
}

/// Adjoins a fresh k-tuple `c` whose facts copy those of the clique members:
/// a fact on `M ∪ c` meeting `c` holds iff it holds after replacing `c` by the
/// first member disjoint from the fact's old elements.
pub fn extend_clique(m: &Structure, a: &KClique) -> Result<CliqueExtension> {
    a.verify(m)?;
    let n = m.size();
    let k = a.k;
    let fresh: Tuple = (n..n + k).collect();

    let substitute = |args: &[Element], member: &[Element]| -> Tuple {
        args.iter().map(|&x| if x >= n { member[x - n] } else { x }).collect()
    };
    let mut candidates: Vec<(crate::structure::RelId, Tuple)> = Vec::new();
    for member in &a.members {
        let mut pos = vec![usize::MAX; n];
        for (i, &e) in member.iter().enumerate() {
            pos[e] = i;
        }
        for &id in member.iter().flat_map(|&e| m.incident(e)).sorted().dedup() {
            let f = m.fact(id);
            let args: Tuple = f.args.iter().map(|&x| if pos[x] != usize::MAX { n + pos[x] } else { x }).collect();
            candidates.push((f.rel, args));
        }
    }
    candidates.sort();
    candidates.dedup();
    let new_facts: Vec<_> = candidates
        .into_iter()
        .filter(|(rel, args)| {
            let old: Vec<Element> = args.iter().copied().filter(|&x| x < n).collect();
            a.members.iter().find(|t| disjoint(t, &old)).is_some_and(|t| m.holds(*rel, &substitute(args, t)))
        })
        .collect();
    let facts = m.facts().iter().map(|f| (f.rel, f.args.to_vec())).chain(new_facts);
    let structure = Structure::new(m.signature().clone(), n + k, facts)?;

    let mut members = a.members.clone();
    members.push(fresh);
    members.sort();
    let clique = KClique { k, members };
    clique.verify(&structure).map_err(|e| Error::Verification(format!("extended clique fails: {e}")))?;

    let r = m.signature().max_arity();
    let large_enough = sufficiently_large(a.size(), k, r);
    let mut ext = CliqueExtension {
        structure,
        clique,
        large_enough,
        preserved_checked: 0,
        preserved_broken: 0,
        skipped_k: Vec::new(),
    };
    for kp in 1..=k {
        let old = match enumerate_maximal_kcliques(m, kp, None) {
            Ok(c) => c,
            Err(Error::GuardExceeded(_)) => {
                ext.skipped_k.push(kp);
                continue;
            }
            Err(e) => return Err(e),
        };
        for c in old.iter().filter(|c| sufficiently_large(c.size(), k, r)) {
            ext.preserved_checked += 1;
            if !c.is_clique_in(&ext.structure)? {
                if large_enough {
                    return Err(Error::Verification(format!("{:?} stopped being a clique", c.members)));
                }
                ext.preserved_broken += 1;
            }
        }
    }
    Ok(ext)
}

/// The common type of the clique members over a parameter set disjoint from
/// the carrier, with subject positions `x0..x(k-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AverageTypeTemplate {
    pub k: usize,
    pub diagram: QfDiagram,
}

pub fn average_type(m: &Structure, a: &KClique, params: &[Element]) -> Result<AverageTypeTemplate> {
    if a.size() < 2 {
        return Err(Error::Precondition("average type needs at least two members".into()));
    }
    m.check_elements(params)?;
    let carrier = a.carrier();
    if !disjoint(params, &carrier) {
        return Err(Error::Overlap("parameters meet the clique carrier".into()));
    }
    let pm = mask(m.size(), params);
    let diagrams: Vec<QfDiagram> = a.members.iter().map(|t| diagram_masked(m, t, &pm)).collect();
    if let Some(d) = diagrams.iter().find(|d| **d != diagrams[0]) {
        return Err(Error::Verification(format!(
            "members disagree over the parameters: {:?} vs {:?}",
            diagrams[0].render(m),
            d.render(m)
        )));
    }
    Ok(AverageTypeTemplate { k: a.k, diagram: diagrams.into_iter().next().expect("two members") })
}
