//! Brute-force oracles and seeded generators shared by integration tests.
//! Nothing here calls the library's search or clique code; structures are
//! inspected only through `size`, `signature`, `facts` and `holds`.
#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use sibtool_core::{Element, Signature, Structure, Tuple};

/// Random structure on `n` elements; each candidate tuple (repeats allowed)
/// becomes a fact with probability `density`.
pub fn random_structure(rng: &mut impl Rng, sig: &Signature, n: usize, density: f64) -> Structure {
    let mut facts = Vec::new();
    for r in sig.ids() {
        for t in (0..sig.arity(r)).map(|_| 0..n).multi_cartesian_product() {
            if rng.random_bool(density) {
                facts.push((r, t));
            }
        }
    }
    Structure::new(sig.clone(), n, facts).unwrap()
}

/// One of a few small signatures with at most two relations of arity at most 2.
pub fn small_signature(rng: &mut impl Rng) -> Signature {
    let options: [&[(&str, usize)]; 5] =
        [&[("E", 2)], &[("E", 2), ("P", 1)], &[("E", 2), ("F", 2)], &[("P", 1), ("Q", 1)], &[("P", 1)]];
    Signature::new(options[rng.random_range(0..options.len())].iter().copied()).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<Element> {
    let mut p: Vec<Element> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn relabel(m: &Structure, perm: &[Element]) -> Structure {
    let facts = m.facts().iter().map(|f| (f.rel, f.args.iter().map(|&e| perm[e]).collect::<Tuple>()));
    Structure::new(m.signature().clone(), m.size(), facts).unwrap()
}

/// Every fact maps to a fact under the full map `perm` (a bijection).
pub fn is_automorphism(m: &Structure, perm: &[Element]) -> bool {
    m.facts().iter().all(|f| {
        let img: Tuple = f.args.iter().map(|&e| perm[e]).collect();
        m.holds(f.rel, &img)
    })
}

/// The map swapping `a` and `b` pointwise is an automorphism.
pub fn swap_exchangeable(m: &Structure, a: &[Element], b: &[Element]) -> bool {
    let mut perm: Vec<Element> = (0..m.size()).collect();
    for (&x, &y) in a.iter().zip(b) {
        perm[x] = y;
        perm[y] = x;
    }
    is_automorphism(m, &perm)
}

/// Quantifier-free types of `c` and `d` over `params` agree: every atomic
/// formula over `c`-slots and parameters, and every equality, has the same
/// truth value.
pub fn same_qf_type(m: &Structure, c: &[Element], d: &[Element], params: &[Element]) -> bool {
    if c.len() != d.len() {
        return false;
    }
    let n = c.len();
    // equalities among slots and with parameters
    for i in 0..n {
        for j in 0..n {
            if (c[i] == c[j]) != (d[i] == d[j]) {
                return false;
            }
        }
        for &p in params {
            if (c[i] == p) != (d[i] == p) {
                return false;
            }
        }
    }
    // slots 0..n are subject positions, n.. are parameters
    let domain = n + params.len();
    let resolve = |subject: &[Element], s: usize| if s < n { subject[s] } else { params[s - n] };
    let sig = m.signature();
    for r in sig.ids() {
        for slots in (0..sig.arity(r)).map(|_| 0..domain).multi_cartesian_product() {
            if slots.iter().all(|&s| s >= n) {
                continue;
            }
            let a: Tuple = slots.iter().map(|&s| resolve(c, s)).collect();
            let b: Tuple = slots.iter().map(|&s| resolve(d, s)).collect();
            if m.holds(r, &a) != m.holds(r, &b) {
                return false;
            }
        }
    }
    true
}

pub fn complement(m: &Structure, used: &[Element]) -> Vec<Element> {
    (0..m.size()).filter(|e| !used.contains(e)).collect()
}

/// `tp(a b / rest) = tp(b a / rest)`.
pub fn type_exchangeable(m: &Structure, a: &[Element], b: &[Element]) -> bool {
    let ab: Tuple = a.iter().chain(b).copied().collect();
    let ba: Tuple = b.iter().chain(a).copied().collect();
    same_qf_type(m, &ab, &ba, &complement(m, &ab))
}

/// Every reordering of the family has the type of the original, over the
/// complement of the family.
pub fn totally_indiscernible(m: &Structure, family: &[Tuple]) -> bool {
    let flat: Tuple = family.iter().flatten().copied().collect();
    let rest = complement(m, &flat);
    (0..family.len()).permutations(family.len()).all(|pi| {
        let permuted: Tuple = pi.iter().flat_map(|&i| family[i].iter().copied()).collect();
        same_qf_type(m, &flat, &permuted, &rest)
    })
}

pub fn pairwise_disjoint(family: &[Tuple]) -> bool {
    let all: Vec<Element> = family.iter().flatten().copied().collect();
    all.iter().collect::<BTreeSet<_>>().len() == all.len()
}

/// Ordered `k`-tuples with distinct entries.
pub fn distinct_tuples(n: usize, k: usize) -> Vec<Tuple> {
    (0..n).permutations(k).collect()
}

/// Injective maps `a -> b` preserving and reflecting every relation.
pub fn embeds_brute(a: &Structure, b: &Structure) -> bool {
    if a.size() > b.size() {
        return false;
    }
    (0..b.size()).permutations(a.size()).any(|map| preserves_and_reflects(a, b, &map))
}

pub fn preserves_and_reflects(a: &Structure, b: &Structure, map: &[Element]) -> bool {
    let sig = a.signature();
    sig.ids().all(|r| {
        (0..sig.arity(r)).map(|_| 0..a.size()).multi_cartesian_product().all(|t| {
            let img: Tuple = t.iter().map(|&e| map[e]).collect();
            a.holds(r, &t) == b.holds(r, &img)
        })
    })
}

pub fn isomorphic_brute(a: &Structure, b: &Structure) -> bool {
    a.size() == b.size() && a.facts().len() == b.facts().len() && embeds_brute(a, b)
}

/// All injective assignments satisfying `holds`, by exhaustive search.
pub fn realizations_brute(n: usize, arity: usize, holds: impl Fn(&[Element]) -> bool) -> Vec<Tuple> {
    (0..n).permutations(arity).filter(|t| holds(t)).collect()
}

/// Largest number of pairwise disjoint sets, by trying every subset.
pub fn max_packing_brute(sets: &[Tuple]) -> usize {
    assert!(sets.len() <= 20, "brute-force packing is exponential");
    let mut best = 0;
    for mask in 0u32..(1 << sets.len()) {
        let chosen: Vec<Tuple> = (0..sets.len()).filter(|i| mask >> i & 1 == 1).map(|i| sets[i].clone()).collect();
        if chosen.len() > best && pairwise_disjoint(&chosen) {
            best = chosen.len();
        }
    }
    best
}

/// Classes of the relation "swapping the two points is an automorphism"
/// (an equivalence relation: it is closed under conjugation).
pub fn one_point_classes(m: &Structure) -> Vec<Vec<Element>> {
    let mut classes: Vec<Vec<Element>> = Vec::new();
    for e in 0..m.size() {
        match classes.iter_mut().find(|c| swap_exchangeable(m, &[c[0]], &[e])) {
            Some(c) => c.push(e),
            None => classes.push(vec![e]),
        }
    }
    classes
}
