use crate::bitset::EdgeSet;
use crate::error::Result;
use crate::graph::Graph;
use crate::spin::SpinGraph;

use super::canon::{graph_key, spin_key};
use super::contraction::{contract, Contraction};

/// Subsets of `{0..m}` of size `k` in increasing bitmask order.
pub fn subsets_of_size(m: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u128 << m;
    let mut next: Option<u128> = (k <= m).then(|| (1u128 << k) - 1);
    std::iter::from_fn(move || {
        let current = next?;
        next = (current != 0)
            .then(|| {
                let c = current & current.wrapping_neg();
                let r = current + c;
                (((r ^ current) >> 2) / c) | r
            })
            .filter(|&x| x < limit);
        Some(current as u64)
    })
}

/// A contraction `γ: A → B'` with `γ_*(P, s) ≅ (P', s')` when `A ≥ B`.
pub fn order_test(a: &SpinGraph, b: &SpinGraph) -> Result<Option<Contraction>> {
    let ga = &a.graph;
    let gb = &b.graph;
    if ga.genus() != gb.genus() || ga.num_legs() != gb.num_legs() || a.parity() != b.parity() {
        return Ok(None);
    }
    let Some(k) = ga.num_edges().checked_sub(gb.num_edges()) else { return Ok(None) };
    let target = spin_key(gb, &b.spin);
    for bits in subsets_of_size(ga.num_edges(), k) {
        let f = EdgeSet::from_bits(ga.num_edges(), bits)?;
        let c = contract(ga, &f)?;
        if c.target.num_vertices() != gb.num_vertices() {
            continue;
        }
        let pushed = c.push_spin(&a.spin)?;
        if spin_key(&c.target, &pushed) == target {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// The same search for plain graphs.
pub fn graph_order_test(a: &Graph, b: &Graph) -> Result<Option<Contraction>> {
    if a.genus() != b.genus() || a.num_legs() != b.num_legs() {
        return Ok(None);
    }
    let Some(k) = a.num_edges().checked_sub(b.num_edges()) else { return Ok(None) };
    let target = graph_key(b);
    for bits in subsets_of_size(a.num_edges(), k) {
        let c = contract(a, &EdgeSet::from_bits(a.num_edges(), bits)?)?;
        if c.target.num_vertices() == b.num_vertices() && graph_key(&c.target) == target {
            return Ok(Some(c));
        }
    }
    Ok(None)
}
