//! Small named structures used throughout tests, fixtures and the CLI.

use crate::structure::{Signature, Structure, Tuple};

fn sig(rels: &[(&str, usize)]) -> Signature {
    Signature::new(rels.iter().map(|&(n, a)| (n, a))).expect("static signature")
}

/// `n` elements, no relations.
pub fn empty_language(n: usize) -> Structure {
    Structure::empty(Signature::default(), n)
}

/// Directed path `S(i, i+1)` on `n` elements.
pub fn path(n: usize) -> Structure {
    let facts = (1..n).map(|i| ("S", vec![i - 1, i]));
    Structure::from_named(sig(&[("S", 2)]), n, facts).expect("valid path")
}

/// `n` disjoint symmetric `E`-edges `{2i, 2i+1}`.
pub fn edges(n: usize) -> Structure {
    edges_with_clique(n, 0)
}

/// `edges` disjoint symmetric edges followed by an irreflexive `E`-clique on
/// `clique` further elements.
pub fn edges_with_clique(edges: usize, clique: usize) -> Structure {
    let mut facts: Vec<(&str, Tuple)> = Vec::new();
    for i in 0..edges {
        facts.push(("E", vec![2 * i, 2 * i + 1]));
        facts.push(("E", vec![2 * i + 1, 2 * i]));
    }
    let base = 2 * edges;
    for a in 0..clique {
        for b in 0..clique {
            if a != b {
                facts.push(("E", vec![base + a, base + b]));
            }
        }
    }
    Structure::from_named(sig(&[("E", 2)]), base + clique, facts).expect("valid edges")
}

/// Equivalence relation `E` (reflexive, symmetric, transitive) with consecutive
/// classes of the given sizes.
pub fn eqrel(classes: &[usize]) -> Structure {
    let mut facts: Vec<(&str, Tuple)> = Vec::new();
    let mut start = 0;
    for &c in classes {
        for a in start..start + c {
            for b in start..start + c {
                facts.push(("E", vec![a, b]));
            }
        }
        start += c;
    }
    Structure::from_named(sig(&[("E", 2)]), start, facts).expect("valid eqrel")
}

/// Strict linear order `L(i, j)` iff `i < j`.
pub fn linear_order(n: usize) -> Structure {
    let facts = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| ("L", vec![i, j])));
    Structure::from_named(sig(&[("L", 2)]), n, facts).expect("valid order")
}
