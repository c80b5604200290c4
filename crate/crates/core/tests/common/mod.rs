#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinmod::spin::{SpinGraph, SpinStructure};
use spinmod::{EdgeSet, Graph};

/// A relabeled copy of `g`: vertices and half-edges shuffled, legs kept in order.
/// Returns the copy, the vertex map and the edge map.
pub fn relabel(g: &Graph, seed: u64) -> (Graph, Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pv: Vec<usize> = (0..g.num_vertices()).collect();
    let mut ph: Vec<usize> = (0..g.num_half_edges()).collect();
    pv.shuffle(&mut rng);
    ph.shuffle(&mut rng);

    let mut weights = vec![0; g.num_vertices()];
    for v in 0..g.num_vertices() {
        weights[pv[v]] = g.weight(v);
    }
    let mut endpoint = vec![0; g.num_half_edges()];
    let mut involution = vec![0; g.num_half_edges()];
    for h in 0..g.num_half_edges() {
        endpoint[ph[h]] = pv[g.endpoint(h)];
        involution[ph[h]] = ph[g.involution(h)];
    }
    let legs = g.legs().iter().map(|&h| ph[h]).collect();
    let copy = Graph::from_half_edges(weights, endpoint, involution, legs).expect("relabeled graph is valid");
    let edge_map = (0..g.num_edges())
        .map(|e| copy.edge_of(ph[g.edge_half_edges(e)[0]]).expect("edge maps to edge"))
        .collect();
    (copy, pv, edge_map)
}

pub fn relabel_spin(sg: &SpinGraph, seed: u64) -> SpinGraph {
    let (copy, pv, edge_map) = relabel(&sg.graph, seed);
    let p = sg.spin.cycle();
    let cycle = EdgeSet::from_indices(copy.num_edges(), p.iter().map(|e| edge_map[e])).unwrap();
    let old = sg.graph.components_of(p);
    let new = copy.components_of(&cycle);
    let mut signs = vec![false; sg.spin.signs().len()];
    for v in 0..sg.graph.num_vertices() {
        signs[new[pv[v]]] = sg.spin.signs()[old[v]];
    }
    let spin = SpinStructure::new(&copy, cycle, signs).unwrap();
    SpinGraph::new(copy, spin).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Edge count between each unordered vertex pair, split by membership in `p`.
fn pair_counts(g: &Graph, p: Option<&EdgeSet>) -> BTreeMap<(usize, usize, bool), usize> {
    let mut m = BTreeMap::new();
    for e in 0..g.num_edges() {
        let (a, b) = g.edge_ends(e);
        let inside = p.is_some_and(|p| p.contains(e));
        *m.entry((a.min(b), a.max(b), inside)).or_insert(0) += 1;
    }
    m
}

/// Isomorphism by trying every vertex bijection. Edges between a fixed pair
/// of vertices are interchangeable, so a vertex bijection extends exactly
/// when multiplicities (split by `P`) and signs agree.
pub fn brute_isomorphic(a: &SpinGraph, b: &SpinGraph) -> bool {
    let (ga, gb) = (&a.graph, &b.graph);
    if ga.num_vertices() != gb.num_vertices()
        || ga.num_edges() != gb.num_edges()
        || ga.num_legs() != gb.num_legs()
        || a.spin.cycle().count() != b.spin.cycle().count()
    {
        return false;
    }
    let (la, lb) = (ga.leg_vertices(), gb.leg_vertices());
    let ma = pair_counts(ga, Some(a.spin.cycle()));
    let mb = pair_counts(gb, Some(b.spin.cycle()));
    let (ca, cb) = (ga.components_of(a.spin.cycle()), gb.components_of(b.spin.cycle()));
    permutations(ga.num_vertices()).into_iter().any(|pi| {
        (0..ga.num_vertices()).all(|v| ga.weight(v) == gb.weight(pi[v]))
            && la.iter().zip(&lb).all(|(&x, &y)| pi[x] == y)
            && ma.iter().all(|(&(u, v, inside), &k)| {
                let (x, y) = (pi[u].min(pi[v]), pi[u].max(pi[v]));
                mb.get(&(x, y, inside)) == Some(&k)
            })
            && (0..ga.num_vertices()).all(|v| a.spin.signs()[ca[v]] == b.spin.signs()[cb[pi[v]]])
    })
}

pub fn brute_isomorphic_graphs(a: &Graph, b: &Graph) -> bool {
    let wrap = |g: &Graph| SpinGraph::new(g.clone(), SpinStructure::trivial(g)).unwrap();
    brute_isomorphic(&wrap(a), &wrap(b))
}
