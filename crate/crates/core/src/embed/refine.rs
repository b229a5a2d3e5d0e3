//! Color refinement (1-dimensional Weisfeiler–Leman) on relational structures.
//!
//! Colors are canonical: they are ranks of sorted signatures, so isomorphic
//! inputs get identical color histograms, and refining several structures
//! jointly makes their colors comparable.

use std::collections::BTreeMap;

use crate::structure::{Element, Structure};

const SELF: u32 = u32::MAX;

/// A fact seen from one of its elements: relation plus the colors of the
/// arguments, with the viewing element marked.
type View = (usize, Vec<u32>);

fn views(s: &Structure, e: Element, color: &[u32]) -> Vec<View> {
    let mut v: Vec<View> = s
        .incident(e)
        .iter()
        .map(|&id| {
            let f = s.fact(id);
            (f.rel.0, f.args.iter().map(|&x| if x == e { SELF } else { color[x] }).collect())
        })
        .collect();
    v.sort();
    v
}

/// Stable refined colors for each input structure.
pub fn refine_colors(structures: &[&Structure]) -> Vec<Vec<u32>> {
    let mut colors: Vec<Vec<u32>> = structures.iter().map(|s| vec![0; s.size()]).collect();
    let mut classes = if structures.iter().any(|s| s.size() > 0) { 1 } else { 0 };
    loop {
        let sigs: Vec<Vec<(u32, Vec<View>)>> = structures
            .iter()
            .zip(&colors)
            .map(|(s, col)| (0..s.size()).map(|e| (col[e], views(s, e, col))).collect())
            .collect();
        let mut rank: BTreeMap<&(u32, Vec<View>), u32> = BTreeMap::new();
        for per in &sigs {
            for sig in per {
                rank.insert(sig, 0);
            }
        }
        for (i, v) in rank.values_mut().enumerate() {
            *v = i as u32;
        }
        let next: Vec<Vec<u32>> = sigs.iter().map(|per| per.iter().map(|sig| rank[sig]).collect()).collect();
        let count = rank.len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

/// Sorted multiset of colors.
pub fn histogram(colors: &[u32]) -> Vec<(u32, usize)> {
    let mut h: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in colors {
        *h.entry(c).or_default() += 1;
    }
    h.into_iter().collect()
}
