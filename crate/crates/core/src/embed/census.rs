//! Partition a list of structures by bi-embeddability and, inside each block,
//! by isomorphism.

use std::collections::BTreeMap;

use itertools::Itertools;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::canon::{canonical_form, CanonicalKey};
use super::{find_embedding, is_isomorphic};
use crate::error::Result;
use crate::par;
use crate::structure::Structure;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusBlock {
    /// Isomorphism classes inside the block, as input indices.
    pub iso_classes: Vec<Vec<usize>>,
}

impl CensusBlock {
    pub fn members(&self) -> Vec<usize> {
        self.iso_classes.iter().flatten().copied().sorted().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusPartition {
    pub blocks: Vec<CensusBlock>,
}

impl CensusPartition {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, index: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.iso_classes.iter().any(|c| c.contains(&index)))
    }
}

pub fn census(structures: &[Structure]) -> Result<CensusPartition> {
    if let Some(first) = structures.first() {
        for s in &structures[1..] {
            first.signature().check_same(s.signature())?;
        }
    }
    let keys = par::map(structures, canonical_form);
    let mut groups: BTreeMap<&CanonicalKey, Vec<usize>> = BTreeMap::new();
    for (i, k) in keys.iter().enumerate() {
        groups.entry(k).or_default().push(i);
    }
    let groups: Vec<(&CanonicalKey, Vec<usize>)> = groups.into_iter().collect();

    // Exact keys already are isomorphism classes; invariant keys need search.
    let split = par::map(&groups, |(key, members)| -> Result<Vec<Vec<usize>>> {
        if key.is_exact() {
            return Ok(vec![members.clone()]);
        }
        let mut classes: Vec<Vec<usize>> = Vec::new();
        'next: for &i in members {
            for class in classes.iter_mut() {
                if is_isomorphic(&structures[class[0]], &structures[i])?.is_some() {
                    class.push(i);
                    continue 'next;
                }
            }
            classes.push(vec![i]);
        }
        Ok(classes)
    });
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for s in split {
        classes.extend(s?);
    }

    // Bi-embeddability between classes. Mutual injections force equal
    // cardinality, so only equal-size pairs are searched.
    let pairs: Vec<(usize, usize)> = (0..classes.len())
        .tuple_combinations()
        .filter(|&(i, j)| structures[classes[i][0]].size() == structures[classes[j][0]].size())
        .collect();
    let linked = par::map(&pairs, |&(i, j)| -> Result<bool> {
        let (a, b) = (&structures[classes[i][0]], &structures[classes[j][0]]);
        Ok(find_embedding(a, b)?.is_some() && find_embedding(b, a)?.is_some())
    });
    let mut uf = UnionFind::<usize>::new(classes.len());
    for (&(i, j), l) in pairs.iter().zip(linked) {
        if l? {
            uf.union(i, j);
        }
    }

    let mut blocks: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for (ci, class) in classes.iter().enumerate() {
        let root = uf.find_mut(ci);
        blocks.entry(root).or_default().push(class.clone());
    }
    let mut blocks: Vec<CensusBlock> = blocks.into_values().map(|iso_classes| CensusBlock { iso_classes }).collect();
    // classes were produced in canonical-key order, so ordering blocks by their
    // first class keeps the output independent of scheduling
    blocks.sort_by_key(|b| {
        let first = b.iso_classes[0][0];
        (keys[first].clone(), first)
    });
    Ok(CensusPartition { blocks })
}
