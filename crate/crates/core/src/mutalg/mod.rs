//! Atomic mutual algebraicity: multiplicity bounds, the MA hypergraph and its
//! components, and packing of disjoint realizations.

mod formula;

pub use formula::{Literal, QfConjunction, Term};

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::embed::census;
use crate::error::{Error, Result};
use crate::par;
use crate::presentations::Presentation;
use crate::structure::{Element, RelId, Structure};

/// Largest number of distinct-entry `rel`-facts containing a single element.
pub fn ma_bound(m: &Structure, rel: RelId) -> usize {
    let mut count = vec![0usize; m.size()];
    for f in m.facts_of(rel).filter(|f| !f.has_repeats()) {
        for &e in f.args.iter() {
            count[e] += 1;
        }
    }
    count.into_iter().max().unwrap_or(0)
}

pub fn ma_bound_named(m: &Structure, rel: &str) -> Result<usize> {
    Ok(ma_bound(m, m.signature().id(rel)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationBound {
    pub relation: String,
    pub bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaReport {
    pub relations: Vec<RelationBound>,
}

pub fn ma_report(m: &Structure) -> MaReport {
    let relations = m
        .signature()
        .ids()
        .map(|r| RelationBound { relation: m.signature().name(r).to_string(), bound: ma_bound(m, r) })
        .collect();
    MaReport { relations }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Bounded,
    Growing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaTrend {
    pub relation: String,
    /// `(t, bound on the size-t truncation)`.
    pub points: Vec<(usize, usize)>,
    pub verdict: Trend,
}

/// `ma_bound` along truncations; bounded iff constant on the last half of the range.
pub fn ma_trend(p: &Presentation, rel: &str, ts: RangeInclusive<usize>) -> Result<MaTrend> {
    if ts.is_empty() {
        return Err(Error::Precondition("empty truncation range".into()));
    }
    let ts: Vec<usize> = ts.collect();
    let points = par::map(&ts, |&t| -> Result<(usize, usize)> {
        let s = p.truncate(t)?;
        Ok((t, ma_bound_named(&s, rel)?))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let tail = &points[points.len() / 2..];
    let verdict = if tail.iter().all(|&(_, b)| b == tail[0].1) { Trend::Bounded } else { Trend::Growing };
    Ok(MaTrend { relation: rel.to_string(), points, verdict })
}

/// Element sets of facts with at least two distinct entries.
pub fn ma_hyperedges(m: &Structure) -> Vec<Vec<Element>> {
    m.facts()
        .iter()
        .map(|f| f.args.iter().copied().sorted().dedup().collect::<Vec<_>>())
        .filter(|e| e.len() >= 2)
        .sorted()
        .dedup()
        .collect()
}

/// Connected components of the MA hypergraph, each sorted, ordered by least element.
pub fn ma_components(m: &Structure) -> Vec<Vec<Element>> {
    let mut uf = UnionFind::<usize>::new(m.size());
    for f in m.facts() {
        for w in f.args.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut blocks: BTreeMap<usize, Vec<Element>> = BTreeMap::new();
    for e in 0..m.size() {
        blocks.entry(uf.find_mut(e)).or_default().push(e);
    }
    blocks.into_values().sorted_by_key(|b| b[0]).collect()
}

/// `part` is connected using only hyperedges inside it. The empty set is not.
pub fn is_connected_part(m: &Structure, part: &[Element]) -> Result<bool> {
    m.check_elements(part)?;
    let Some(&first) = part.first() else {
        return Ok(false);
    };
    let mut inside = vec![false; m.size()];
    for &e in part {
        inside[e] = true;
    }
    let mut seen = vec![false; m.size()];
    let mut stack = vec![first];
    seen[first] = true;
    while let Some(x) = stack.pop() {
        for &id in m.incident(x) {
            let f = m.fact(id);
            if f.args.iter().all(|&y| inside[y]) {
                for &y in f.args.iter() {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
    }
    Ok(part.iter().all(|&e| seen[e]))
}

/// A strictly increasing chain of connected parts ending in `component`,
/// starting from its least element and adding one hyperedge at a time.
pub fn connected_chain(m: &Structure, component: &[Element]) -> Result<Vec<Vec<Element>>> {
    let target: Vec<Element> = component.iter().copied().sorted().dedup().collect();
    if !is_connected_part(m, &target)? {
        return Err(Error::Precondition(format!("{target:?} is not a connected part")));
    }
    let mut inside = vec![false; m.size()];
    for &e in &target {
        inside[e] = true;
    }
    let mut current = vec![target[0]];
    let mut have = vec![false; m.size()];
    have[target[0]] = true;
    let mut chain = vec![current.clone()];
    while current.len() < target.len() {
        let grow = current
            .iter()
            .flat_map(|&x| m.incident(x).iter().copied())
            .sorted()
            .map(|id| m.fact(id))
            .find(|f| f.args.iter().all(|&y| inside[y]) && f.args.iter().any(|&y| !have[y]))
            .expect("a connected part grows along some hyperedge");
        for &y in grow.args.iter() {
            if !have[y] {
                have[y] = true;
                current.push(y);
            }
        }
        current.sort_unstable();
        chain.push(current.clone());
    }
    for link in &chain {
        if !is_connected_part(m, link)? {
            return Err(Error::Verification(format!("chain link {link:?} is not connected")));
        }
    }
    Ok(chain)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentClass {
    pub representative: Structure,
    /// Components (as element sets of the host) in this isomorphism class.
    pub components: Vec<Vec<Element>>,
}

impl ComponentClass {
    pub fn multiplicity(&self) -> usize {
        self.components.len()
    }
}

/// Components grouped by isomorphism type; the representative of each class
/// is its first component, classes ordered as in the census.
pub fn component_census(m: &Structure) -> Result<Vec<ComponentClass>> {
    let comps = ma_components(m);
    let pieces: Vec<Structure> = comps.iter().map(|c| m.induced_substructure(c)).collect::<Result<_>>()?;
    let partition = census(&pieces)?;
    let mut out = Vec::new();
    for block in partition.blocks {
        for class in block.iso_classes {
            out.push(ComponentClass {
                representative: pieces[class[0]].clone(),
                components: class.iter().map(|&i| comps[i].clone()).collect(),
            });
        }
    }
    Ok(out)
}

pub const DEFAULT_PACKING_CAP: usize = 32;
/// Cap on the number of satisfying assignments enumerated for packing.
pub const REALIZATION_GUARD: usize = 1_000_000;

/// Satisfying assignments of `phi` with pairwise distinct values.
pub fn realizations(m: &Structure, phi: &QfConjunction) -> Result<Vec<Vec<Element>>> {
    let rels = phi.check(m)?;
    let v = phi.arity();
    let order: Vec<usize> = (0..v).collect();
    let schedule = phi.schedule(&order);
    let firsts: Vec<Element> = (0..m.size()).collect();
    let per_first = par::map(&firsts, |&x0| -> Result<Vec<Vec<Element>>> {
        let mut out = Vec::new();
        let mut assign = vec![usize::MAX; v];
        assign[0] = x0;
        if schedule[0].iter().all(|&i| phi.eval(m, &rels, i, &assign)) {
            extend(m, phi, &rels, &schedule, &mut assign, 1, &mut out)?;
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for p in per_first {
        all.extend(p?);
        if all.len() > REALIZATION_GUARD {
            return Err(Error::GuardExceeded(format!("more than {REALIZATION_GUARD} realizations")));
        }
    }
    Ok(all)
}

fn extend(
    m: &Structure,
    phi: &QfConjunction,
    rels: &[Option<RelId>],
    schedule: &[Vec<usize>],
    assign: &mut Vec<Element>,
    depth: usize,
    out: &mut Vec<Vec<Element>>,
) -> Result<()> {
    if depth == assign.len() {
        if out.len() >= REALIZATION_GUARD {
            return Err(Error::GuardExceeded(format!("more than {REALIZATION_GUARD} realizations")));
        }
        out.push(assign.clone());
        return Ok(());
    }
    for x in 0..m.size() {
        if assign[..depth].contains(&x) {
            continue;
        }
        assign[depth] = x;
        if schedule[depth].iter().all(|&i| phi.eval(m, rels, i, assign)) {
            extend(m, phi, rels, schedule, assign, depth + 1, out)?;
        }
    }
    assign[depth] = usize::MAX;
    Ok(())
}

struct Packing {
    conflicts: Vec<FixedBitSet>,
    sets: Vec<Vec<Element>>,
    min_len: usize,
    cap: usize,
    best: usize,
}

impl Packing {
    fn upper_bound(&self, p: &FixedBitSet) -> usize {
        let free: FixedBitSet = p.ones().flat_map(|i| self.sets[i].iter().copied()).collect();
        p.count_ones(..).min(free.count_ones(..) / self.min_len)
    }

    fn search(&mut self, p: FixedBitSet, current: usize) {
        if current > self.best {
            self.best = current;
        }
        if self.best >= self.cap || p.is_clear() || current + self.upper_bound(&p) <= self.best {
            return;
        }
        // branch on the candidate with the fewest live conflicts
        let v = p.ones().min_by_key(|&i| (p.intersection(&self.conflicts[i]).count(), i)).expect("p is nonempty");
        let mut with = p.clone();
        with.difference_with(&self.conflicts[v]);
        with.set(v, false);
        self.search(with, current + 1);
        let mut without = p;
        without.set(v, false);
        self.search(without, current);
    }
}

/// Largest family (at most `cap`) of realizations of `phi` that are pairwise
/// disjoint as element sets.
pub fn max_disjoint_realizations(m: &Structure, phi: &QfConjunction, cap: usize) -> Result<usize> {
    if cap == 0 {
        return Err(Error::Precondition("cap must be at least 1".into()));
    }
    let sets: Vec<Vec<Element>> = realizations(m, phi)?
        .into_iter()
        .map(|r| r.into_iter().sorted().collect::<Vec<_>>())
        .sorted()
        .dedup()
        .collect();
    max_disjoint_sets(&sets, cap)
}

/// Exact maximum set packing, stopping once `cap` is reached.
pub fn max_disjoint_sets(sets: &[Vec<Element>], cap: usize) -> Result<usize> {
    if sets.is_empty() {
        return Ok(0);
    }
    let n = sets.len();
    let width = sets.iter().flatten().max().map_or(0, |&e| e + 1);
    let masks: Vec<FixedBitSet> = sets
        .iter()
        .map(|s| {
            let mut b = FixedBitSet::with_capacity(width);
            for &e in s {
                b.insert(e);
            }
            b
        })
        .collect();
    let conflicts: Vec<FixedBitSet> = par::map_range(n, |i| {
        let mut c = FixedBitSet::with_capacity(n);
        for j in 0..n {
            if i != j && !masks[i].is_disjoint(&masks[j]) {
                c.insert(j);
            }
        }
        c
    });
    // greedy start: shortest sets first
    let mut used = FixedBitSet::with_capacity(width);
    let mut greedy = 0;
    for i in (0..n).sorted_by_key(|&i| (sets[i].len(), i)) {
        if used.is_disjoint(&masks[i]) {
            used.union_with(&masks[i]);
            greedy += 1;
        }
    }
    let min_len = sets.iter().map(Vec::len).min().unwrap_or(1).max(1);
    let mut packing = Packing { conflicts, sets: sets.to_vec(), min_len, cap, best: greedy.min(cap) };
    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    packing.search(all, 0);
    Ok(packing.best.min(cap))
}
