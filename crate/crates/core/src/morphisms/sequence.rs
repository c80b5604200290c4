use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spin::SpinGraph;

use super::automorphism::{automorphisms, AutGroup, AutOrders, AutRestriction, Automorphism};
use super::contraction::contract;

/// Group orders around `1 → Aut(P̄) → Aut(G,P,s) → Aut_G(G/P,s) → 1`.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceReport {
    pub aut_spin: AutOrders,
    /// `Aut(P̄)`, computed on the graph `P̄` with all its legs fixed.
    pub aut_pbar: AutOrders,
    /// `Aut_G(G/P,s)`: the automorphisms of `G/P` induced by `Aut(G,P,s)`.
    pub image: AutOrders,
    /// Every automorphism of `G/P` preserving the signs.
    pub quotient: AutOrders,
    /// `|Aut(G,P,s)| = |Aut(P̄)|·|Aut_G(G/P,s)|` for the action on `V ∪ H`.
    pub holds_half_edge: bool,
    /// The same identity for the induced action on `V ∪ E`.
    pub holds_edge_action: bool,
    pub image_is_proper: bool,
}

/// Computes the three groups independently: `Aut(P̄)` on the graph `P̄`
/// itself, `Aut_G(G/P,s)` as the set of maps induced on components and
/// removed half-edges. Fails if the kernel of the induced map differs from
/// `Aut(P̄)` or the image is not inside `Aut(G/P,s)`.
pub fn sequence_check(sg: &SpinGraph) -> Result<SequenceReport> {
    let g = &sg.graph;
    let s = &sg.spin;
    let p = s.cycle();
    let group = automorphisms(g, AutRestriction::Spin(s))?;
    let pbar = g.remove_edges(&p.complement(), true)?;
    let aut_pbar = automorphisms(&pbar, AutRestriction::None)?;
    let kernel = automorphisms(g, AutRestriction::Pbar(p))?.filter(g, |a| a.act_on_spin(g, s).ok().as_ref() == Some(s));
    let witness = || format!("spin graph with P = {}", p.to_hex());
    // open removal keeps half-edge ids, so kernel elements restrict verbatim
    let restricted: BTreeSet<Automorphism> = kernel.elements().iter().cloned().collect();
    let direct: BTreeSet<Automorphism> = aut_pbar.elements().iter().cloned().collect();
    if restricted != direct {
        return Err(Error::verification(witness(), "Aut(P̄) differs from the kernel of Aut(G,P,s) → Aut(G/P,s)"));
    }

    let quotient = contract(g, p)?;
    let h = &quotient.target;
    let comp = &quotient.vertex_map;
    let mut hnew = vec![usize::MAX; g.num_half_edges()];
    let kept = (0..g.num_half_edges()).filter(|&x| g.edge_of(x).map_or(true, |e| !p.contains(e)));
    for (i, x) in kept.enumerate() {
        hnew[x] = i;
    }
    let mut induced = BTreeSet::new();
    for a in group.elements() {
        let mut vertices = vec![usize::MAX; h.num_vertices()];
        for v in 0..g.num_vertices() {
            vertices[comp[v]] = comp[a.vertices[v]];
        }
        let mut half_edges = vec![usize::MAX; h.num_half_edges()];
        for x in 0..g.num_half_edges() {
            if hnew[x] != usize::MAX {
                half_edges[hnew[x]] = hnew[a.half_edges[x]];
            }
        }
        let b = Automorphism { vertices, half_edges };
        if !b.is_valid(h) {
            return Err(Error::verification(witness(), "induced map on G/P is not an automorphism"));
        }
        induced.insert(b);
    }
    let image = AutGroup::new(h, induced.into_iter().collect());
    let signs = s.signs();
    let full = automorphisms(h, AutRestriction::None)?.filter(h, |b| (0..h.num_vertices()).all(|v| signs[b.vertices[v]] == signs[v]));
    let full_set: BTreeSet<&Automorphism> = full.elements().iter().collect();
    if image.elements().iter().any(|b| !full_set.contains(b)) {
        return Err(Error::verification(witness(), "induced automorphism does not preserve the signs on G/P"));
    }
    let (a, k, i) = (group.orders(), aut_pbar.orders(), image.orders());
    Ok(SequenceReport {
        holds_half_edge: a.half_edge == k.half_edge * i.half_edge,
        holds_edge_action: a.edge_action == k.edge_action * i.edge_action,
        image_is_proper: image.order() < full.order(),
        aut_spin: a,
        aut_pbar: k,
        image: i,
        quotient: full.orders(),
    })
}

/// The graph `P̄` used by [`sequence_check`].
pub fn pbar_graph(sg: &SpinGraph) -> Result<Graph> {
    sg.graph.remove_edges(&sg.spin.cycle().complement(), true)
}
