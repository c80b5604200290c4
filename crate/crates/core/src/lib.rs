//! Enumeration and verification engine for spin graphs and tropical spin curves.
//!
//! The crate is organized bottom-up: [`graph`] and [`cycles`] hold the
//! combinatorics of a single graph, [`spin`] the spin structures on it,
//! [`morphisms`] contractions, automorphisms and canonical keys, [`posets`]
//! the moduli posets up to isomorphism, and [`tropical`] the cone complex and
//! tropicalization of families. [`suites`] bundles the verification checks
//! behind a name-keyed registry used by the command-line tool.

pub mod bitset;
pub mod cycles;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod morphisms;
pub mod posets;
pub mod refine;
pub mod registry;
pub mod spin;
pub mod suites;
pub mod tropical;

pub use bitset::{EdgeSet, VertexSet};
pub use error::{Error, Result};
pub use graph::Graph;
