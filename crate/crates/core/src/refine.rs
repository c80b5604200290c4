//! One-edge refinements of non-basic Eulerian graphs.
//!
//! Given a non-basic Eulerian stable graph `G` and a sign `s` on the single
//! vertex of `G/G`, find a stable `G'` with one more edge `e'` contracting
//! to `G`, and a connected spin structure `(P', s')` on `G'` that is fixed by
//! all of `Aut(G')`, pushes forward to `(G, s)` under every contraction
//! `G' → G`, and is the only spin structure on `G'` doing so.
//!
//! Candidates are produced by splitting one vertex `v` into `u₁` (keeping
//! the id of `v`) and a new vertex `u₂`, joined by `e'`. They are visited in
//! a fixed order and the first one passing every check is returned:
//! vertex `v`; then the pair of half-edges `(h₁, h₂)` at `v` (on a common
//! circuit) sent to `u₁` and `u₂`; then the number of loops at `v` whose two
//! halves get separated; then the bitmask sending the remaining half-edges
//! and legs at `v` to `u₂`; then the weight of `u₁`.

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::EdgeSet;
use crate::cycles::{enumerate_cyclic, is_cyclic, pbar_decompose, DEFAULT_B1_CAP};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::morphisms::{automorphisms, contract, graph_key, AutRestriction, Contraction};
use crate::spin::{enumerate_spin, SpinGraph, SpinStructure};

#[derive(Clone, Debug)]
pub struct Refinement {
    pub refined: SpinGraph,
    /// `G' → G`, contracting `e'`.
    pub contraction: Contraction,
    pub split_vertex: usize,
    pub new_edge: usize,
    /// `P' = E(G')`; otherwise `P' = E(G') ∖ {e'}`.
    pub eulerian: bool,
    pub candidates_tried: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinementSummary {
    pub split_vertex: usize,
    pub vertices: usize,
    pub edges: usize,
    pub eulerian: bool,
    pub cycle: String,
    pub candidates_tried: usize,
}

impl Refinement {
    pub fn summary(&self) -> RefinementSummary {
        RefinementSummary {
            split_vertex: self.split_vertex,
            vertices: self.refined.graph.num_vertices(),
            edges: self.refined.graph.num_edges(),
            eulerian: self.eulerian,
            cycle: self.refined.spin.cycle().to_hex(),
            candidates_tried: self.candidates_tried,
        }
    }
}

struct Candidate {
    graph: Graph,
    new_edge: usize,
}

/// Circuits (connected, every touched vertex of degree 2) of `g`.
fn circuits(g: &Graph) -> Result<Vec<EdgeSet>> {
    Ok(enumerate_cyclic(g, DEFAULT_B1_CAP)?
        .into_iter()
        .filter(|p| {
            if p.is_empty() {
                return false;
            }
            let touched: Vec<usize> = (0..g.num_vertices()).filter(|&v| g.degree_in(v, p) > 0).collect();
            let labels = g.components_of(p);
            touched.iter().all(|&v| g.degree_in(v, p) == 2 && labels[v] == labels[touched[0]])
        })
        .collect())
}

/// Splits `v`: `to_u2` half-edges (non-leg or leg) move to a new vertex.
fn split(g: &Graph, v: usize, to_u2: &[usize], w1: u32) -> Result<Candidate> {
    let u2 = g.num_vertices();
    let mut weights = g.weights().to_vec();
    let w = weights[v];
    weights[v] = w1;
    weights.push(w - w1);
    let mut endpoint = g.endpoints().to_vec();
    for &h in to_u2 {
        endpoint[h] = u2;
    }
    let mut involution = g.involution_map().to_vec();
    let a = endpoint.len();
    endpoint.extend([v, u2]);
    involution.extend([a + 1, a]);
    let graph = Graph::from_half_edges(weights, endpoint, involution, g.legs().to_vec())?;
    let new_edge = graph.edge_of(a).expect("new edge");
    Ok(Candidate { graph, new_edge })
}

fn check_preconditions(g: &Graph) -> Result<()> {
    let fail = |m: &str| Err(Error::Domain(format!("refinement needs {m}")));
    if !g.is_stable() {
        return fail("a stable graph");
    }
    if !g.is_eulerian() {
        return fail("an Eulerian graph");
    }
    if g.genus() < 2 {
        return fail("genus at least 2");
    }
    if g.num_edges() == 0 {
        return fail("at least one edge");
    }
    if g.is_basic() {
        return fail("a non-basic graph");
    }
    Ok(())
}

/// Checks every required property of a candidate; returns the refinement
/// on success and a reason on failure.
fn verify(g: &Graph, s: bool, c: Candidate, v: usize) -> Result<std::result::Result<Refinement, String>> {
    let gp = &c.graph;
    if !gp.is_stable() {
        return Ok(Err("unstable".into()));
    }
    if gp.num_edges() != g.num_edges() + 1 || gp.b1() != g.b1() {
        return Ok(Err("edge count or b1 mismatch".into()));
    }
    let eulerian = gp.is_eulerian();
    let mut cycle = gp.all_edges();
    if !eulerian {
        cycle.remove(c.new_edge);
    }
    if !is_cyclic(gp, &cycle) {
        return Ok(Err("P' not cyclic".into()));
    }
    let d = pbar_decompose(gp, &cycle)?;
    if d.len() != 1 {
        return Ok(Err("P' is not connected".into()));
    }
    let spin = SpinStructure::with_decomposition(&d, vec![s])?;
    let contraction = contract(gp, &EdgeSet::from_indices(gp.num_edges(), [c.new_edge])?)?;
    if graph_key(&contraction.target) != graph_key(g) {
        return Ok(Err("contraction of e' does not give G".into()));
    }
    let key = graph_key(g);
    let mut to_g = Vec::new();
    for e in 0..gp.num_edges() {
        let gamma = contract(gp, &EdgeSet::from_indices(gp.num_edges(), [e])?)?;
        if graph_key(&gamma.target) == key {
            to_g.push(gamma);
        }
    }
    let lands_on_g = |gamma: &Contraction, x: &SpinStructure| -> Result<bool> {
        let pushed = gamma.push_spin(x)?;
        Ok(*pushed.cycle() == gamma.target.all_edges() && pushed.signs() == [s])
    };
    for gamma in &to_g {
        if !lands_on_g(gamma, &spin)? {
            return Ok(Err(format!("contraction of {} does not push to (G, s)", gamma.contracted.to_hex())));
        }
    }
    for other in enumerate_spin(gp, DEFAULT_B1_CAP)? {
        if other == spin {
            continue;
        }
        for gamma in &to_g {
            if lands_on_g(gamma, &other)? {
                return Ok(Err(format!("second lift with P' = {}", other.cycle().to_hex())));
            }
        }
    }
    let full = automorphisms(gp, AutRestriction::None)?;
    let fixing = automorphisms(gp, AutRestriction::Spin(&spin))?;
    if full.order() != fixing.order() {
        return Ok(Err("spin structure is not Aut-invariant".into()));
    }
    let refined = SpinGraph::new(gp.clone(), spin)?;
    Ok(Ok(Refinement { refined, contraction, split_vertex: v, new_edge: c.new_edge, eulerian, candidates_tried: 0 }))
}

/// All candidates at one vertex, in search order.
fn candidates_at(g: &Graph, v: usize, circuits: &[EdgeSet]) -> Vec<(Vec<usize>, u32)> {
    let halves: Vec<usize> = g.half_edges_at(v).filter(|&h| !g.is_leg(h)).collect();
    let legs: Vec<usize> = g.half_edges_at(v).filter(|&h| g.is_leg(h)).collect();
    let on_common_circuit = |h1: usize, h2: usize| {
        let (e1, e2) = (g.edge_of(h1).unwrap(), g.edge_of(h2).unwrap());
        circuits.iter().any(|c| c.contains(e1) && c.contains(e2))
    };
    let mut out = Vec::new();
    for (i, &h1) in halves.iter().enumerate() {
        for &h2 in &halves[i + 1..] {
            if !on_common_circuit(h1, h2) {
                continue;
            }
            let rest: Vec<usize> = halves.iter().copied().filter(|&h| h != h1 && h != h2).chain(legs.iter().copied()).collect();
            let split_loops = |mask: u64| {
                rest.iter()
                    .enumerate()
                    .filter(|&(j, &h)| {
                        let partner = g.involution(h);
                        partner != h
                            && h < partner
                            && rest.iter().position(|&x| x == partner).is_some_and(|k| (mask >> j & 1) != (mask >> k & 1))
                    })
                    .count()
            };
            let mut masks: Vec<(usize, u64)> = (0..1u64 << rest.len()).map(|m| (split_loops(m), m)).collect();
            masks.sort();
            for (_, mask) in masks {
                let mut to_u2 = vec![h2];
                to_u2.extend(rest.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &h)| h));
                for w1 in 0..=g.weight(v) {
                    out.push((to_u2.clone(), w1));
                }
            }
        }
    }
    out
}

/// Searches for a refinement of `(G, G, s)`.
pub fn refine_nonbasic(g: &Graph, s: bool) -> Result<Refinement> {
    check_preconditions(g)?;
    let circuits = circuits(g)?;
    let per_vertex: Vec<Result<(usize, Option<Refinement>)>> = (0..g.num_vertices())
        .into_par_iter()
        .map(|v| {
            let mut tried = 0;
            for (to_u2, w1) in candidates_at(g, v, &circuits) {
                tried += 1;
                let candidate = split(g, v, &to_u2, w1)?;
                if let Ok(mut r) = verify(g, s, candidate, v)? {
                    r.candidates_tried = tried;
                    return Ok((tried, Some(r)));
                }
            }
            Ok((tried, None))
        })
        .collect();
    let mut tried_before = 0;
    for result in per_vertex {
        let (tried, found) = result?;
        if let Some(mut r) = found {
            r.candidates_tried += tried_before;
            return Ok(r);
        }
        tried_before += tried;
    }
    Err(Error::verification(
        format!("graph {}", graph_key(g)),
        format!("no refinement among {tried_before} candidates"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn rose_of_three_loops() {
        let r = refine_nonbasic(&rose(3, 0), false).unwrap();
        let gp = &r.refined.graph;
        assert_eq!(gp.num_vertices(), 2);
        assert_eq!(gp.weights(), &[0, 0]);
        assert_eq!(gp.loops_at(0), 1);
        assert_eq!(gp.loops_at(1), 1);
        assert_eq!(gp.multiplicities()[&(0, 1)], 2);
        assert!(r.eulerian);
        assert_eq!(*r.refined.spin.cycle(), gp.all_edges());
    }

    #[test]
    fn degree_four_without_loops_is_not_eulerian() {
        // Two weight-0 vertices joined by four edges: each vertex has degree 4,
        // no loop and no weight, so the split leaves u1 and u2 odd.
        let r = refine_nonbasic(&quadruple_edge(), true).unwrap();
        assert!(!r.eulerian);
        let gp = &r.refined.graph;
        let odd: Vec<usize> = (0..gp.num_vertices()).filter(|&v| gp.degree(v) % 2 == 1).collect();
        assert_eq!(odd.len(), 2);
        assert!(!r.refined.spin.cycle().contains(r.new_edge));
        assert_eq!(r.refined.spin.signs(), &[true]);
    }

    #[test]
    fn weight_two_vertex_with_loop() {
        let g = Graph::new(vec![2], &[(0, 0)], &[]).unwrap();
        let r = refine_nonbasic(&g, false).unwrap();
        assert_eq!(r.refined.graph.weights(), &[1, 1]);
        assert_eq!(r.refined.graph.multiplicities()[&(0, 1)], 2);
    }

    #[test]
    fn basic_graphs_are_rejected() {
        assert!(matches!(refine_nonbasic(&looped_double_edge(), false), Err(Error::Domain(_))));
        assert!(matches!(refine_nonbasic(&theta(), false), Err(Error::Domain(_))));
        assert!(matches!(refine_nonbasic(&weighted_vertex(3, 0), false), Err(Error::Domain(_))));
    }
}
