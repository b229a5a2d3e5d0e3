//! Component chains: connected finite structures `C_0, C_1, ...`, each
//! properly embedding into the next and not back, plus background components
//! that embed into none of them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::pattern::{language_of, parse_language, StructureSpec};
use super::{ValidationReport, Violation};
use crate::embed::{find_embedding, is_isomorphic};
use crate::error::{Error, Result};
use crate::mutalg::{component_census, is_connected_part, ma_components};
use crate::par;
use crate::structure::{disjoint_union_all, Signature, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub schema_version: u32,
    pub language: Vec<String>,
    pub chain: Vec<StructureSpec>,
    #[serde(default)]
    pub background: Vec<StructureSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentChain {
    signature: Signature,
    chain: Vec<Structure>,
    background: Vec<Structure>,
}

impl ComponentChain {
    pub fn new(signature: Signature, chain: Vec<Structure>, background: Vec<Structure>) -> Result<Self> {
        if chain.len() < 2 {
            return Err(Error::Presentation("a component chain needs at least two members".into()));
        }
        for s in chain.iter().chain(&background) {
            signature.check_same(s.signature())?;
        }
        Ok(ComponentChain { signature, chain, background })
    }

    pub fn from_doc(doc: ChainDoc) -> Result<Self> {
        let sig = parse_language(&doc.language)?;
        let build = |specs: &[StructureSpec]| specs.iter().map(|s| s.build(&sig)).collect::<Result<Vec<_>>>();
        Self::new(sig.clone(), build(&doc.chain)?, build(&doc.background)?)
    }

    pub fn to_doc(&self) -> ChainDoc {
        ChainDoc {
            schema_version: super::SCHEMA_VERSION,
            language: language_of(&self.signature),
            chain: self.chain.iter().map(StructureSpec::of).collect(),
            background: self.background.iter().map(StructureSpec::of).collect(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn chain(&self) -> &[Structure] {
        &self.chain
    }

    pub fn background(&self) -> &[Structure] {
        &self.background
    }

    /// Background plus `C_i` for `i < t`.
    pub fn truncate(&self, t: usize) -> Result<Structure> {
        let parts: Vec<Structure> = self.background.iter().chain(self.chain.iter().take(t)).cloned().collect();
        disjoint_union_all(&self.signature, &parts)
    }

    /// Connectivity of each `C_i`, the embedding conditions between
    /// neighbours, and that no background component embeds into a chain
    /// member. `t` is recorded but the whole chain is always checked.
    pub fn validate(&self, t: usize) -> Result<ValidationReport> {
        let mut violations = Vec::new();
        let mut checked = 0;
        for (i, c) in self.chain.iter().enumerate() {
            checked += 1;
            let all: Vec<usize> = (0..c.size()).collect();
            if !is_connected_part(c, &all)? {
                violations.push(Violation { map: format!("C_{i}"), witness: "not MA-connected".into() });
            }
        }
        let steps: Vec<usize> = (0..self.chain.len() - 1).collect();
        let results = par::map(&steps, |&i| -> Result<Vec<Violation>> {
            let (a, b) = (&self.chain[i], &self.chain[i + 1]);
            let mut out = Vec::new();
            if find_embedding(a, b)?.is_none() {
                out.push(Violation { map: format!("C_{i} -> C_{}", i + 1), witness: "no embedding".into() });
            }
            if let Some(w) = find_embedding(b, a)? {
                out.push(Violation {
                    map: format!("C_{} -> C_{i}", i + 1),
                    witness: format!("embeds via {:?}", w.map),
                });
            }
            Ok(out)
        });
        for r in results {
            checked += 2;
            violations.extend(r?);
        }
        for (j, z) in self.background.iter().enumerate() {
            for comp in ma_components(z) {
                let part = z.induced_substructure(&comp)?;
                for (i, c) in self.chain.iter().enumerate() {
                    checked += 1;
                    if let Some(w) = find_embedding(&part, c)? {
                        violations.push(Violation {
                            map: format!("background {j} component {comp:?} -> C_{i}"),
                            witness: format!("embeds via {:?}", w.map),
                        });
                    }
                }
            }
        }
        Ok(ValidationReport { t, checked, violations })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ns {
    pub structure: Structure,
    /// Chain indices present in the output.
    pub included: Vec<usize>,
}

impl ComponentChain {
    /// Background plus `C_i` for `i ∈ S`, `i < t`. The component census of
    /// the output is checked to contain `C_i` exactly for those `i`.
    pub fn generate_ns(&self, s: &BTreeSet<usize>, t: usize) -> Result<Ns> {
        if let Some(&i) = s.iter().find(|&&i| i >= self.chain.len()) {
            return Err(Error::Precondition(format!("index {i} outside the chain 0..{}", self.chain.len())));
        }
        let report = self.validate(t)?;
        if !report.is_valid() {
            return Err(Error::Presentation(format!("invalid chain: {}", report.violations[0])));
        }
        let included: Vec<usize> = s.iter().copied().filter(|&i| i < t).collect();
        let parts: Vec<Structure> =
            self.background.iter().cloned().chain(included.iter().map(|&i| self.chain[i].clone())).collect();
        let structure = disjoint_union_all(&self.signature, &parts)?;
        let classes = component_census(&structure)?;
        for (i, c) in self.chain.iter().enumerate().take(t) {
            let mut found = false;
            for class in &classes {
                if is_isomorphic(&class.representative, c)?.is_some() {
                    found = true;
                    break;
                }
            }
            if found != included.contains(&i) {
                return Err(Error::Verification(format!(
                    "component census {} C_{i}",
                    if found { "unexpectedly contains" } else { "is missing" }
                )));
            }
        }
        Ok(Ns { structure, included })
    }
}

/// Directed paths `path(from) .. path(to)`, no background.
pub fn path_chain(from: usize, to: usize) -> Result<ComponentChain> {
    if from < 2 || to <= from {
        return Err(Error::Precondition(format!("path chain needs 2 <= from < to, got {from}..{to}")));
    }
    let chain: Vec<Structure> = (from..=to).map(crate::catalog::path).collect();
    ComponentChain::new(chain[0].signature().clone(), chain, Vec::new())
}
