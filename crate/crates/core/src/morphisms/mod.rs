//! Contractions, automorphisms, canonical keys, the contraction order and
//! the automorphism groups around a spin graph's quotient.

mod automorphism;
mod canon;
mod contraction;
mod order;
mod sequence;

pub use automorphism::{automorphisms, AutGroup, AutOrders, AutRestriction, Automorphism, AUT_CAP};
pub use canon::{canonical_key, cycle_key, graph_key, spin_key, CanonicalKey};
pub use contraction::{contract, Contraction, ContractionWitness};
pub use order::{graph_order_test, order_test, subsets_of_size};
pub use sequence::{pbar_graph, sequence_check, SequenceReport};
