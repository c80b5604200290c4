//! Moduli posets up to isomorphism: stable graphs `S_{g,n}`, cyclic
//! subgraphs `[C_{g,n}]` and spin graphs `[SP_{g,n}]`, ordered by contraction.

mod enumerate;
mod poset;

pub use enumerate::{
    enumerate_stable_graphs, enumerator_registry, is_nonempty, three_regular_graphs, Budget, ClosureEnumerator,
    DirectEnumerator, GraphClass, GraphEnumerator,
};
pub use poset::{
    build_poset, build_spin_poset, check_forgetful_maps, poset_stats, IsoClass, Poset, PosetKind, PosetStats,
};
