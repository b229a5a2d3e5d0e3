//! Finite relational structures and the combinatorics of their siblings:
//! exchangeable tuples and `k`-cliques, mutual algebraicity at the atomic
//! level, embedding search and canonical forms, and finitely presented
//! countable structures (cellular, grid, component chains) with their
//! truncations and sibling-family generators.

pub mod catalog;
pub mod cliques;
pub mod embed;
pub mod error;
pub mod mutalg;
pub mod par;
pub mod presentations;
pub mod qftype;
pub mod structure;

pub use error::{Error, Result};
pub use structure::{Element, RelId, Signature, Structure, Tuple};
