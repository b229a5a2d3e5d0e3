//! Quantifier-free types of tuples over parameter sets.
//!
//! A type over `A` is materialized as a [`QfDiagram`]: every fact whose entries
//! lie in `subject ∪ A` and that mentions at least one subject element, with
//! subject elements replaced by their index. Facts living entirely inside `A`
//! are common to all tuples and are left out. Since every relation has arity at
//! most `r`, the diagram is polynomial in `|A|`.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::{disjoint, is_distinct, Element, RelId, Structure, Tuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Slot {
    Subject(usize),
    Param(Element),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QfDiagram {
    pub subject_len: usize,
    pub params: Vec<Element>,
    /// `(i, e)`: subject position `i` is the parameter `e`.
    pub equalities: Vec<(usize, Element)>,
    pub facts: Vec<(RelId, Vec<Slot>)>,
}

impl QfDiagram {
    pub fn render(&self, m: &Structure) -> Vec<String> {
        let mut out: Vec<String> = self
            .facts
            .iter()
            .map(|(rel, slots)| {
                let args: Vec<String> = slots
                    .iter()
                    .map(|s| match s {
                        Slot::Subject(i) => format!("x{i}"),
                        Slot::Param(e) => e.to_string(),
                    })
                    .collect();
                format!("{}({})", m.signature().name(*rel), args.join(","))
            })
            .collect();
        out.sort();
        out.extend(self.equalities.iter().map(|(i, e)| format!("x{i}={e}")));
        out
    }
}

/// Parameter membership as a dense mask.
pub(crate) fn mask(size: usize, elems: &[Element]) -> Vec<bool> {
    let mut m = vec![false; size];
    for &e in elems {
        m[e] = true;
    }
    m
}

/// Mask of `M \ excluded`.
pub(crate) fn complement_mask(size: usize, excluded: &[Element]) -> Vec<bool> {
    let mut m = vec![true; size];
    for &e in excluded {
        m[e] = false;
    }
    m
}

fn check_subject(m: &Structure, c: &[Element]) -> Result<()> {
    m.check_elements(c)?;
    if !is_distinct(c) {
        return Err(Error::RepeatedEntries(c.to_vec()));
    }
    Ok(())
}

/// Diagram of `c` over the parameter set given as a mask.
pub(crate) fn diagram_masked(m: &Structure, c: &[Element], params: &[bool]) -> QfDiagram {
    let mut subject = vec![None; m.size()];
    for (i, &e) in c.iter().enumerate() {
        subject[e] = Some(i);
    }
    let mut ids: Vec<usize> = c.iter().flat_map(|&e| m.incident(e).iter().copied()).collect();
    ids.sort_unstable();
    ids.dedup();
    let mut facts: Vec<(RelId, Vec<Slot>)> = ids
        .into_iter()
        .map(|id| m.fact(id))
        .filter(|f| f.args.iter().all(|&e| subject[e].is_some() || params[e]))
        .map(|f| {
            let slots = f
                .args
                .iter()
                .map(|&e| match subject[e] {
                    Some(i) => Slot::Subject(i),
                    None => Slot::Param(e),
                })
                .collect();
            (f.rel, slots)
        })
        .collect();
    facts.sort();
    let equalities = c.iter().enumerate().filter(|&(_, &e)| params[e]).map(|(i, &e)| (i, e)).collect();
    let param_list = (0..m.size()).filter(|&e| params[e]).collect();
    QfDiagram { subject_len: c.len(), params: param_list, equalities, facts }
}

/// The quantifier-free type of `c` over `params`.
pub fn qf_diagram(m: &Structure, c: &[Element], params: &[Element]) -> Result<QfDiagram> {
    check_subject(m, c)?;
    m.check_elements(params)?;
    Ok(diagram_masked(m, c, &mask(m.size(), params)))
}

/// Equality of the quantifier-free types of `c` and `d` over `params`.
pub fn type_equal(m: &Structure, c: &[Element], d: &[Element], params: &[Element]) -> Result<bool> {
    if c.len() != d.len() {
        return Err(Error::LengthMismatch(c.len(), d.len()));
    }
    check_subject(m, c)?;
    check_subject(m, d)?;
    m.check_elements(params)?;
    let pm = mask(m.size(), params);
    Ok(type_equal_masked(m, c, d, &pm))
}

pub(crate) fn type_equal_masked(m: &Structure, c: &[Element], d: &[Element], params: &[bool]) -> bool {
    c == d || diagram_masked(m, c, params) == diagram_masked(m, d, params)
}

fn check_sequence(m: &Structure, seq: &[Tuple], params: &[Element], window: usize) -> Result<()> {
    if window < 2 {
        return Err(Error::Precondition(format!("window must be at least 2, got {window}")));
    }
    m.check_elements(params)?;
    if let Some(first) = seq.first() {
        for t in seq {
            if t.len() != first.len() {
                return Err(Error::LengthMismatch(first.len(), t.len()));
            }
            check_subject(m, t)?;
            if !disjoint(t, params) {
                return Err(Error::Overlap(format!("{t:?} meets the parameter set")));
            }
        }
    }
    for (i, j) in (0..seq.len()).tuple_combinations() {
        if !disjoint(&seq[i], &seq[j]) {
            return Err(Error::Overlap(format!("{:?} and {:?}", seq[i], seq[j])));
        }
    }
    Ok(())
}

fn concat(seq: &[Tuple], idx: &[usize]) -> Tuple {
    idx.iter().flat_map(|&i| seq[i].iter().copied()).collect()
}

/// Every two increasing subsequences of equal length `≤ window` have the same
/// type over `params`.
pub fn is_order_indiscernible(m: &Structure, seq: &[Tuple], params: &[Element], window: usize) -> Result<bool> {
    check_sequence(m, seq, params, window)?;
    let pm = mask(m.size(), params);
    for len in 1..=window.min(seq.len()) {
        let reference = diagram_masked(m, &concat(seq, &(0..len).collect::<Vec<_>>()), &pm);
        for idx in (0..seq.len()).combinations(len) {
            if diagram_masked(m, &concat(seq, &idx), &pm) != reference {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every two injective index sequences of equal length `≤ window` give the same
/// type over `params`.
pub fn is_totally_indiscernible(m: &Structure, seq: &[Tuple], params: &[Element], window: usize) -> Result<bool> {
    check_sequence(m, seq, params, window)?;
    let pm = mask(m.size(), params);
    for len in 1..=window.min(seq.len()) {
        let reference = diagram_masked(m, &concat(seq, &(0..len).collect::<Vec<_>>()), &pm);
        for idx in (0..seq.len()).permutations(len) {
            if diagram_masked(m, &concat(seq, &idx), &pm) != reference {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Permissible coordinate permutations of one array member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PermissibleSet {
    pub k: usize,
    /// Sorted; `pi[i]` is the source position of output position `i`.
    pub perms: Vec<Vec<usize>>,
}

impl PermissibleSet {
    pub fn contains(&self, pi: &[usize]) -> bool {
        self.perms.binary_search_by(|p| p.as_slice().cmp(pi)).is_ok()
    }

    /// Identity, closure under composition and inverses.
    pub fn is_subgroup(&self) -> bool {
        let id: Vec<usize> = (0..self.k).collect();
        if !self.contains(&id) {
            return false;
        }
        self.perms.iter().all(|p| {
            let mut inv = vec![0; self.k];
            for (i, &x) in p.iter().enumerate() {
                inv[x] = i;
            }
            self.contains(&inv)
                && self.perms.iter().all(|q| {
                    let comp: Vec<usize> = (0..self.k).map(|i| p[q[i]]).collect();
                    self.contains(&comp)
                })
        })
    }
}

pub fn permute(t: &[Element], pi: &[usize]) -> Tuple {
    pi.iter().map(|&i| t[i]).collect()
}

/// The permutations `π` of `Sym(k)` with `tp(π(a_q) / M∖a_q) = tp(a_q / M∖a_q)`,
/// cross-checked against the map that permutes `a_q` by `π` and fixes
/// everything else being an automorphism.
pub fn permissible_permutations(m: &Structure, array: &[Tuple], q: usize) -> Result<PermissibleSet> {
    let member = array
        .get(q)
        .ok_or_else(|| Error::Precondition(format!("index {q} out of range for array of {}", array.len())))?;
    check_sequence(m, array, &[], 2)?;
    let k = member.len();
    let rest = crate::qftype::complement_mask(m.size(), member);
    let mut perms = Vec::new();
    for pi in (0..k).permutations(k) {
        let image = permute(member, &pi);
        let by_type = type_equal_masked(m, &image, member, &rest);
        let mut map: Vec<Element> = (0..m.size()).collect();
        for (i, &src) in member.iter().enumerate() {
            map[src] = image[i];
        }
        let by_automorphism = m.is_automorphism_on(&map, member);
        if by_type != by_automorphism {
            return Err(Error::Verification(format!(
                "permissibility of {pi:?} on {member:?}: type test {by_type}, automorphism test {by_automorphism}"
            )));
        }
        if by_type {
            perms.push(pi);
        }
    }
    perms.sort();
    let set = PermissibleSet { k, perms };
    if !set.is_subgroup() {
        return Err(Error::Verification(format!("permissible set {:?} is not a subgroup", set.perms)));
    }
    Ok(set)
}
