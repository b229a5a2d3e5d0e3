//! Backtracking search for injective maps that preserve and reflect every
//! relation (induced-substructure matching).

use std::time::{Duration, Instant};

use serde::Serialize;

use super::refine::refine_colors;
use crate::error::{Error, Result};
use crate::par;
use crate::structure::{Element, Structure};

pub const DEFAULT_TIME_GUARD: Duration = Duration::from_secs(10);
pub const TIME_GUARD_ENV: &str = "SIBTOOL_TIME_GUARD_SECS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub time_guard: Duration,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { time_guard: DEFAULT_TIME_GUARD }
    }
}

impl SearchConfig {
    /// Default config, with the guard overridden by `SIBTOOL_TIME_GUARD_SECS` when set.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(secs) = std::env::var(TIME_GUARD_ENV).ok().and_then(|v| v.trim().parse::<f64>().ok()) {
            if secs.is_finite() && secs > 0.0 {
                cfg.time_guard = Duration::from_secs_f64(secs);
            }
        }
        cfg
    }
}

/// An injective map `source → target` with `R(x̄) ⟺ R(map(x̄))` for every relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingWitness {
    pub map: Vec<Element>,
}

impl EmbeddingWitness {
    /// Re-checks injectivity and both directions of every atomic equivalence.
    pub fn validate(&self, source: &Structure, target: &Structure) -> Result<()> {
        validate_map(source, target, &self.map)
    }

    pub fn is_bijective(&self, target: &Structure) -> bool {
        self.map.len() == target.size()
    }

    pub fn compose(&self, then: &EmbeddingWitness) -> EmbeddingWitness {
        EmbeddingWitness { map: self.map.iter().map(|&x| then.map[x]).collect() }
    }
}

pub fn validate_map(a: &Structure, b: &Structure, map: &[Element]) -> Result<()> {
    a.signature().check_same(b.signature())?;
    if map.len() != a.size() {
        return Err(Error::Verification(format!("map has {} entries for {} elements", map.len(), a.size())));
    }
    let mut inverse = vec![usize::MAX; b.size()];
    for (x, &y) in map.iter().enumerate() {
        if y >= b.size() {
            return Err(Error::Verification(format!("{x} maps outside the target ({y})")));
        }
        if inverse[y] != usize::MAX {
            return Err(Error::Verification(format!("{} and {x} both map to {y}", inverse[y])));
        }
        inverse[y] = x;
    }
    for f in a.facts() {
        let img: Vec<Element> = f.args.iter().map(|&x| map[x]).collect();
        if !b.holds(f.rel, &img) {
            return Err(Error::Verification(format!(
                "{}{:?} holds in the source but not on its image",
                a.signature().name(f.rel),
                f.args
            )));
        }
    }
    for f in b.facts() {
        if f.args.iter().all(|&y| inverse[y] != usize::MAX) {
            let pre: Vec<Element> = f.args.iter().map(|&y| inverse[y]).collect();
            if !a.holds(f.rel, &pre) {
                return Err(Error::Verification(format!(
                    "{}{:?} holds on the image but not in the source",
                    b.signature().name(f.rel),
                    f.args
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    Embed,
    Iso,
}

/// Facts whose entries are all `e`, as relation ids.
fn self_facts(s: &Structure, e: Element) -> Vec<usize> {
    let mut v: Vec<usize> = s
        .incident(e)
        .iter()
        .map(|&id| s.fact(id))
        .filter(|f| f.args.iter().all(|&x| x == e))
        .map(|f| f.rel.0)
        .collect();
    v.sort_unstable();
    v
}

struct Problem<'a> {
    a: &'a Structure,
    b: &'a Structure,
    order: Vec<Element>,
    candidates: Vec<Vec<Element>>,
    deadline: Instant,
    guard: Duration,
}

struct State {
    ab: Vec<usize>,
    ba: Vec<usize>,
    nodes: u64,
}

impl Problem<'_> {
    fn consistent(&self, st: &State, x: Element, y: Element) -> bool {
        let mut buf = Vec::new();
        for &id in self.a.incident(x) {
            let f = self.a.fact(id);
            if f.args.iter().all(|&u| st.ab[u] != usize::MAX) {
                buf.clear();
                buf.extend(f.args.iter().map(|&u| st.ab[u]));
                if !self.b.holds(f.rel, &buf) {
                    return false;
                }
            }
        }
        for &id in self.b.incident(y) {
            let f = self.b.fact(id);
            if f.args.iter().all(|&v| st.ba[v] != usize::MAX) {
                buf.clear();
                buf.extend(f.args.iter().map(|&v| st.ba[v]));
                if !self.a.holds(f.rel, &buf) {
                    return false;
                }
            }
        }
        true
    }

    fn assign(&self, st: &mut State, x: Element, y: Element) -> bool {
        st.ab[x] = y;
        st.ba[y] = x;
        if self.consistent(st, x, y) {
            true
        } else {
            st.ab[x] = usize::MAX;
            st.ba[y] = usize::MAX;
            false
        }
    }

    fn dfs(&self, st: &mut State, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        st.nodes += 1;
        if st.nodes.is_multiple_of(1024) && Instant::now() > self.deadline {
            return Err(Error::TimeGuard(self.guard));
        }
        let x = self.order[depth];
        for &y in &self.candidates[x] {
            if st.ba[y] != usize::MAX {
                continue;
            }
            if self.assign(st, x, y) {
                if self.dfs(st, depth + 1)? {
                    return Ok(true);
                }
                st.ab[x] = usize::MAX;
                st.ba[y] = usize::MAX;
            }
        }
        Ok(false)
    }

    fn fresh_state(&self) -> State {
        State { ab: vec![usize::MAX; self.a.size()], ba: vec![usize::MAX; self.b.size()], nodes: 0 }
    }
}

/// Most-constrained-first: repeatedly take the element with the most facts
/// linking it to already-ordered elements, then fewest candidates, then
/// highest degree.
fn variable_order(a: &Structure, candidates: &[Vec<Element>]) -> Vec<Element> {
    let n = a.size();
    let degree: Vec<usize> = (0..n).map(|e| a.incident(e).len()).collect();
    let mut placed = vec![false; n];
    let mut links = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&e| !placed[e])
            .max_by(|&u, &v| {
                links[u]
                    .cmp(&links[v])
                    .then(candidates[v].len().cmp(&candidates[u].len()))
                    .then(degree[u].cmp(&degree[v]))
                    .then(v.cmp(&u))
            })
            .expect("an unplaced element remains");
        placed[next] = true;
        order.push(next);
        for &id in a.incident(next) {
            for &u in a.fact(id).args.iter() {
                if !placed[u] {
                    links[u] += 1;
                }
            }
        }
    }
    order
}

pub(crate) fn run(a: &Structure, b: &Structure, mode: Mode, cfg: &SearchConfig) -> Result<Option<EmbeddingWitness>> {
    a.signature().check_same(b.signature())?;
    if a.size() > b.size() || (mode == Mode::Iso && a.size() != b.size()) {
        return Ok(None);
    }
    let candidates: Vec<Vec<Element>> = match mode {
        Mode::Iso => {
            let colors = refine_colors(&[a, b]);
            (0..a.size()).map(|x| (0..b.size()).filter(|&y| colors[0][x] == colors[1][y]).collect()).collect()
        }
        Mode::Embed => {
            let da: Vec<Vec<usize>> = (0..a.size()).map(|e| a.degree_vector(e)).collect();
            let db: Vec<Vec<usize>> = (0..b.size()).map(|e| b.degree_vector(e)).collect();
            let sa: Vec<Vec<usize>> = (0..a.size()).map(|e| self_facts(a, e)).collect();
            let sb: Vec<Vec<usize>> = (0..b.size()).map(|e| self_facts(b, e)).collect();
            (0..a.size())
                .map(|x| {
                    (0..b.size()).filter(|&y| sa[x] == sb[y] && da[x].iter().zip(&db[y]).all(|(p, q)| p <= q)).collect()
                })
                .collect()
        }
    };
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(None);
    }
    if a.size() == 0 {
        return Ok(Some(EmbeddingWitness { map: Vec::new() }));
    }
    let order = variable_order(a, &candidates);
    let problem = Problem { a, b, deadline: Instant::now() + cfg.time_guard, guard: cfg.time_guard, order, candidates };
    let first = problem.order[0];
    let found = par::try_find_map_first(&problem.candidates[first], |&y| -> Result<Option<Vec<Element>>> {
        let mut st = problem.fresh_state();
        if !problem.assign(&mut st, first, y) {
            return Ok(None);
        }
        Ok(problem.dfs(&mut st, 1)?.then(|| st.ab.clone()))
    })?;
    let witness = found.map(|map| EmbeddingWitness { map });
    if let Some(w) = &witness {
        w.validate(a, b)?;
    }
    Ok(witness)
}
