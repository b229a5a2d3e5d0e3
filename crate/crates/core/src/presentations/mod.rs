//! Finitely presented countable structures and their finite truncations.
//!
//! Three kinds: cellular (a finite base plus families of exchangeable
//! tuples), grid (ordered infinite cliques kept apart by a relation) and
//! component chains. All are stored as JSON documents tagged by `kind` with a
//! mandatory `schema_version`.

pub mod cellular;
pub mod chain;
pub mod grid;
pub mod pattern;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use cellular::{CellularDoc, CellularPresentation, Count, CrossFamily, Family, MStar, PinnedFact};
pub use chain::{ChainDoc, ComponentChain, Ns};
pub use grid::{GridDoc, GridPresentation, Nf, WitnessMode, WitnessTemplate};
pub use pattern::{Pattern, StructureSpec, Token};

use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub map: String,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.map, self.witness)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub t: usize,
    /// Number of maps or conditions inspected.
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "ONE")]
    One,
    #[serde(rename = "ALEPH0")]
    Aleph0,
    #[serde(rename = "CONTINUUM")]
    Continuum,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::One => "ONE",
            Verdict::Aleph0 => "ALEPH0",
            Verdict::Continuum => "CONTINUUM",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiblingVerdict {
    pub verdict: Verdict,
    pub justification: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PresentationDoc {
    Cellular(CellularDoc),
    Grid(GridDoc),
    Chain(ChainDoc),
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Presentation {
    Cellular(CellularPresentation),
    Grid(GridPresentation),
    Chain(ComponentChain),
}

impl Presentation {
    pub fn from_doc(doc: PresentationDoc) -> Result<Self> {
        let version = match &doc {
            PresentationDoc::Cellular(d) => d.schema_version,
            PresentationDoc::Grid(d) => d.schema_version,
            PresentationDoc::Chain(d) => d.schema_version,
        };
        if version != SCHEMA_VERSION {
            return Err(Error::Presentation(format!(
                "unsupported schema_version {version}; expected {SCHEMA_VERSION}"
            )));
        }
        Ok(match doc {
            PresentationDoc::Cellular(d) => Presentation::Cellular(CellularPresentation::from_doc(d)?),
            PresentationDoc::Grid(d) => Presentation::Grid(GridPresentation::from_doc(d)?),
            PresentationDoc::Chain(d) => Presentation::Chain(ComponentChain::from_doc(d)?),
        })
    }

    pub fn to_doc(&self) -> PresentationDoc {
        match self {
            Presentation::Cellular(p) => PresentationDoc::Cellular(p.to_doc()),
            Presentation::Grid(p) => PresentationDoc::Grid(p.to_doc()),
            Presentation::Chain(p) => PresentationDoc::Chain(p.to_doc()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("presentation documents serialize")
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Presentation::Cellular(_) => "cellular",
            Presentation::Grid(_) => "grid",
            Presentation::Chain(_) => "chain",
        }
    }

    pub fn signature(&self) -> &Signature {
        match self {
            Presentation::Cellular(p) => p.signature(),
            Presentation::Grid(p) => p.signature(),
            Presentation::Chain(p) => p.signature(),
        }
    }

    pub fn truncate(&self, t: usize) -> Result<Structure> {
        match self {
            Presentation::Cellular(p) => p.truncate(t),
            Presentation::Grid(p) => p.truncate(t),
            Presentation::Chain(p) => p.truncate(t),
        }
    }

    pub fn validate(&self, t: usize) -> Result<ValidationReport> {
        if t < 3 {
            return Err(Error::Precondition(format!("validation size must be at least 3, got {t}")));
        }
        match self {
            Presentation::Cellular(p) => p.validate(t),
            Presentation::Grid(p) => p.validate(t),
            Presentation::Chain(p) => p.validate(t),
        }
    }

    /// Size used to validate and separate before classifying.
    pub fn classification_size(&self) -> usize {
        let k = match self {
            Presentation::Cellular(p) => p.max_k(),
            Presentation::Grid(p) => p.k(),
            Presentation::Chain(_) => 1,
        };
        (2 * k + self.signature().max_arity() + 2).max(3)
    }

    pub fn classify(&self) -> Result<SiblingVerdict> {
        let t = self.classification_size();
        let report = self.validate(t)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::Presentation(v.to_string()));
        }
        Ok(match self {
            Presentation::Cellular(p) => {
                let sep = p.separate(t)?;
                if sep.is_finitely_partitioned() {
                    SiblingVerdict {
                        verdict: Verdict::One,
                        justification: "cellular and finitely partitioned: every model has one sibling".into(),
                    }
                } else {
                    SiblingVerdict {
                        verdict: Verdict::Aleph0,
                        justification: "cellular with a separated family of tuples longer than 1: aleph_0 siblings"
                            .into(),
                    }
                }
            }
            Presentation::Grid(_) => SiblingVerdict {
                verdict: Verdict::Continuum,
                justification: "grid extension with cut cliques: not cellular, 2^aleph_0 siblings".into(),
            },
            Presentation::Chain(_) => SiblingVerdict {
                verdict: Verdict::Continuum,
                justification: "strictly increasing chain of components: not cellular, 2^aleph_0 siblings".into(),
            },
        })
    }
}

/// Presentations shipped with the library, by name.
pub fn builtin(name: &str) -> Result<Presentation> {
    Ok(match name {
        "edges-clique" => Presentation::Cellular(cellular::edges_and_clique()),
        "edges-independent" => Presentation::Cellular(cellular::edges_and_independent_set()),
        "unary-predicates" => Presentation::Cellular(cellular::unary_predicates(3)),
        "rank0-grid" => Presentation::Grid(grid::rank0_eqrel(1, 3)?),
        "rank0-grid-k2" => Presentation::Grid(grid::rank0_eqrel(2, 3)?),
        "rank1-grid" => Presentation::Grid(grid::rank1_uvr(1, 3, WitnessMode::PerIndex)?),
        "rank1-grid-k2" => Presentation::Grid(grid::rank1_uvr(2, 3, WitnessMode::PerIndex)?),
        "path-chain" => Presentation::Chain(chain::path_chain(2, 6)?),
        _ => return Err(Error::Precondition(format!("no built-in presentation `{name}`"))),
    })
}

pub const BUILTIN_NAMES: &[&str] = &[
    "edges-clique",
    "edges-independent",
    "unary-predicates",
    "rank0-grid",
    "rank0-grid-k2",
    "rank1-grid",
    "rank1-grid-k2",
    "path-chain",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_builtins() {
        let v = |n| builtin(n).unwrap().classify().unwrap().verdict;
        assert_eq!(v("unary-predicates"), Verdict::One);
        assert_eq!(v("edges-clique"), Verdict::Aleph0);
        assert_eq!(v("rank1-grid"), Verdict::Continuum);
        assert_eq!(v("path-chain"), Verdict::Continuum);
    }

    #[test]
    fn json_round_trip_all_builtins() {
        for name in BUILTIN_NAMES {
            let p = builtin(name).unwrap();
            let back = Presentation::from_json(&p.to_json()).unwrap();
            assert_eq!(back, p, "{name}");
        }
    }

    #[test]
    fn schema_version_is_checked() {
        let json = builtin("edges-clique").unwrap().to_json().replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(matches!(Presentation::from_json(&json), Err(Error::Presentation(_))));
        let missing = builtin("edges-clique").unwrap().to_json().replace("\"schema_version\": 1,", "");
        assert!(Presentation::from_json(&missing).is_err());
    }

    #[test]
    fn validation_size_floor() {
        assert!(matches!(builtin("edges-clique").unwrap().validate(2), Err(Error::Precondition(_))));
    }
}
