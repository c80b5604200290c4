use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::bitset::EdgeSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spin::SpinStructure;

/// Largest group the enumerator will materialize.
pub const AUT_CAP: usize = 1 << 20;

/// A bijection of `V ∪ H` preserving weights, endpoints and the involution,
/// and fixing every leg.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    pub vertices: Vec<usize>,
    pub half_edges: Vec<usize>,
}

impl Automorphism {
    pub fn identity(g: &Graph) -> Self {
        Automorphism { vertices: (0..g.num_vertices()).collect(), half_edges: (0..g.num_half_edges()).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.vertices.iter().enumerate().all(|(i, &v)| i == v) && self.half_edges.iter().enumerate().all(|(i, &h)| i == h)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            vertices: other.vertices.iter().map(|&v| self.vertices[v]).collect(),
            half_edges: other.half_edges.iter().map(|&h| self.half_edges[h]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut vertices = vec![0; self.vertices.len()];
        let mut half_edges = vec![0; self.half_edges.len()];
        for (i, &v) in self.vertices.iter().enumerate() {
            vertices[v] = i;
        }
        for (i, &h) in self.half_edges.iter().enumerate() {
            half_edges[h] = i;
        }
        Automorphism { vertices, half_edges }
    }

    /// Checks every defining condition against `g`.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let n = g.num_vertices();
        let nh = g.num_half_edges();
        if self.vertices.len() != n || self.half_edges.len() != nh {
            return false;
        }
        let bijective = |map: &[usize], len: usize| {
            let mut seen = vec![false; len];
            map.iter().all(|&x| x < len && !std::mem::replace(&mut seen[x], true))
        };
        bijective(&self.vertices, n)
            && bijective(&self.half_edges, nh)
            && (0..n).all(|v| g.weight(self.vertices[v]) == g.weight(v))
            && (0..nh).all(|h| {
                g.endpoint(self.half_edges[h]) == self.vertices[g.endpoint(h)]
                    && g.involution(self.half_edges[h]) == self.half_edges[g.involution(h)]
            })
            && g.legs().iter().all(|&l| self.half_edges[l] == l)
    }

    pub fn edge_permutation(&self, g: &Graph) -> Vec<usize> {
        (0..g.num_edges())
            .map(|e| g.edge_of(self.half_edges[g.edge_half_edges(e)[0]]).expect("edges map to edges"))
            .collect()
    }

    pub fn act_on_edges(&self, g: &Graph, f: &EdgeSet) -> EdgeSet {
        let perm = self.edge_permutation(g);
        let mut out = g.no_edges();
        for e in f.iter() {
            out.insert(perm[e]);
        }
        out
    }

    /// `α_*(P, s)`.
    pub fn act_on_spin(&self, g: &Graph, s: &SpinStructure) -> Result<SpinStructure> {
        let p = self.act_on_edges(g, s.cycle());
        let before = g.components_of(s.cycle());
        let after = g.components_of(&p);
        let mut signs = vec![false; s.signs().len()];
        for v in 0..g.num_vertices() {
            signs[after[self.vertices[v]]] = s.signs()[before[v]];
        }
        SpinStructure::new(g, p, signs)
    }
}

/// Which subgroup of `Aut(G)` to return.
#[derive(Clone, Copy, Debug)]
pub enum AutRestriction<'a> {
    None,
    /// `Aut(G, P, s)`.
    Spin(&'a SpinStructure),
    /// Elements fixing every half-edge of `E ∖ P` and every component of `P̄`.
    Pbar(&'a EdgeSet),
}

#[derive(Clone, Debug)]
pub struct AutGroup {
    elements: Vec<Automorphism>,
    edge_actions: Vec<(Vec<usize>, Vec<usize>)>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AutOrders {
    /// Order of the group acting on `V ∪ H`.
    pub half_edge: usize,
    /// Order of the induced action on `V ∪ E`.
    pub edge_action: usize,
}

impl AutGroup {
    pub(crate) fn new(g: &Graph, mut elements: Vec<Automorphism>) -> Self {
        elements.sort();
        let edge_actions: BTreeSet<(Vec<usize>, Vec<usize>)> =
            elements.iter().map(|a| (a.vertices.clone(), a.edge_permutation(g))).collect();
        AutGroup { elements, edge_actions: edge_actions.into_iter().collect() }
    }

    /// The subgroup of elements satisfying `keep` (which must define a subgroup).
    pub fn filter(&self, g: &Graph, keep: impl Fn(&Automorphism) -> bool) -> AutGroup {
        AutGroup::new(g, self.elements.iter().filter(|a| keep(a)).cloned().collect())
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Distinct induced permutations of `(V, E)`, sorted.
    pub fn edge_actions(&self) -> &[(Vec<usize>, Vec<usize>)] {
        &self.edge_actions
    }

    pub fn edge_action_order(&self) -> usize {
        self.edge_actions.len()
    }

    pub fn orders(&self) -> AutOrders {
        AutOrders { half_edge: self.order(), edge_action: self.edge_action_order() }
    }

    /// A generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<Automorphism> {
        let mut generators = Vec::new();
        let Some(first) = self.elements.first() else { return generators };
        let mut span: HashSet<Automorphism> = HashSet::from([Automorphism {
            vertices: (0..first.vertices.len()).collect(),
            half_edges: (0..first.half_edges.len()).collect(),
        }]);
        for a in &self.elements {
            if span.contains(a) {
                continue;
            }
            generators.push(a.clone());
            let mut frontier: Vec<Automorphism> = span.iter().cloned().collect();
            while let Some(x) = frontier.pop() {
                for gen in &generators {
                    let y = gen.compose(&x);
                    if span.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
        }
        generators
    }

    /// Orbits of `Aut` on a list of spin structures, as index lists sorted
    /// by their smallest member.
    pub fn spin_orbits(&self, g: &Graph, spins: &[SpinStructure]) -> Result<Vec<Vec<usize>>> {
        let index: std::collections::HashMap<&SpinStructure, usize> =
            spins.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut orbit_of = vec![usize::MAX; spins.len()];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for i in 0..spins.len() {
            if orbit_of[i] != usize::MAX {
                continue;
            }
            let mut members = BTreeSet::new();
            for a in &self.elements {
                let image = a.act_on_spin(g, &spins[i])?;
                let j = *index
                    .get(&image)
                    .ok_or_else(|| Error::Input("spin list is not closed under automorphisms".into()))?;
                members.insert(j);
            }
            for &j in &members {
                orbit_of[j] = orbits.len();
            }
            orbits.push(members.into_iter().collect());
        }
        Ok(orbits)
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

struct Layout {
    /// Edges between each unordered vertex pair, keyed `(min, max)`.
    pairs: std::collections::BTreeMap<(usize, usize), Vec<usize>>,
}

impl Layout {
    fn new(g: &Graph) -> Self {
        let mut pairs: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
        for e in 0..g.num_edges() {
            let (a, b) = g.edge_ends(e);
            pairs.entry((a.min(b), a.max(b))).or_default().push(e);
        }
        Layout { pairs }
    }

    fn mult(&self, a: usize, b: usize) -> usize {
        self.pairs.get(&(a.min(b), a.max(b))).map_or(0, Vec::len)
    }
}

/// The half-edge of edge `e` attached at `v` (the first one for loops).
fn half_at(g: &Graph, e: usize, v: usize) -> usize {
    let [h, j] = g.edge_half_edges(e);
    if g.endpoint(h) == v {
        h
    } else {
        j
    }
}

fn vertex_permutations(g: &Graph, layout: &Layout) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let invariant: Vec<(u32, usize, usize, usize)> =
        (0..n).map(|v| (g.weight(v), g.degree(v), g.loops_at(v), g.legs_at(v))).collect();
    let pinned: Vec<bool> = (0..n).map(|v| g.legs_at(v) > 0).collect();
    let mut out = Vec::new();
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        v: usize,
        n: usize,
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
        invariant: &[(u32, usize, usize, usize)],
        pinned: &[bool],
        layout: &Layout,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == n {
            out.push(sigma.clone());
            return;
        }
        for u in 0..n {
            if used[u] || invariant[u] != invariant[v] || (pinned[v] && u != v) {
                continue;
            }
            if (0..v).any(|w| layout.mult(v, w) != layout.mult(u, sigma[w])) {
                continue;
            }
            sigma[v] = u;
            used[u] = true;
            go(v + 1, n, sigma, used, invariant, pinned, layout, out);
            used[u] = false;
        }
        sigma[v] = usize::MAX;
    }
    go(0, n, &mut sigma, &mut used, &invariant, &pinned, layout, &mut out);
    out
}

/// All half-edge lifts of one vertex permutation.
fn lifts(g: &Graph, layout: &Layout, sigma: &[usize]) -> Vec<Automorphism> {
    // one option list per vertex pair: partial half-edge maps
    let mut groups: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
    for (&(a, b), edges) in &layout.pairs {
        let (sa, sb) = (sigma[a], sigma[b]);
        let targets = &layout.pairs[&(sa.min(sb), sa.max(sb))];
        let k = edges.len();
        let mut options = Vec::new();
        for perm in permutations(k) {
            if a == b {
                for flips in 0..1u32 << k {
                    let mut map = Vec::with_capacity(2 * k);
                    for i in 0..k {
                        let [h, j] = g.edge_half_edges(edges[i]);
                        let [x, y] = g.edge_half_edges(targets[perm[i]]);
                        let (x, y) = if flips >> i & 1 == 1 { (y, x) } else { (x, y) };
                        map.push((h, x));
                        map.push((j, y));
                    }
                    options.push(map);
                }
            } else {
                let mut map = Vec::with_capacity(2 * k);
                for i in 0..k {
                    let t = targets[perm[i]];
                    map.push((half_at(g, edges[i], a), half_at(g, t, sa)));
                    map.push((half_at(g, edges[i], b), half_at(g, t, sb)));
                }
                options.push(map);
            }
        }
        groups.push(options);
    }
    let mut base = vec![usize::MAX; g.num_half_edges()];
    for &l in g.legs() {
        base[l] = l;
    }
    let mut out = Vec::new();
    fn product(
        i: usize,
        groups: &[Vec<Vec<(usize, usize)>>],
        current: &mut Vec<usize>,
        sigma: &[usize],
        out: &mut Vec<Automorphism>,
    ) {
        if i == groups.len() {
            out.push(Automorphism { vertices: sigma.to_vec(), half_edges: current.clone() });
            return;
        }
        for option in &groups[i] {
            for &(h, x) in option {
                current[h] = x;
            }
            product(i + 1, groups, current, sigma, out);
        }
    }
    product(0, &groups, &mut base, sigma, &mut out);
    out
}

fn lift_count(g: &Graph, layout: &Layout) -> usize {
    layout
        .pairs
        .iter()
        .map(|(&(a, b), edges)| {
            let k = edges.len();
            if a == b {
                factorial(k) << k
            } else {
                factorial(k)
            }
        })
        .product::<usize>()
        .max(usize::from(g.num_vertices() > 0))
}

/// The automorphism group of `g`, optionally restricted.
pub fn automorphisms(g: &Graph, restriction: AutRestriction<'_>) -> Result<AutGroup> {
    let layout = Layout::new(g);
    let sigmas = vertex_permutations(g, &layout);
    let per_sigma = lift_count(g, &layout);
    if sigmas.len().saturating_mul(per_sigma) > AUT_CAP {
        return Err(Error::Budget(format!(
            "automorphism group of order {} exceeds the cap {AUT_CAP}",
            sigmas.len().saturating_mul(per_sigma)
        )));
    }
    let keep: Box<dyn Fn(&Automorphism) -> Result<bool>> = match restriction {
        AutRestriction::None => Box::new(|_| Ok(true)),
        AutRestriction::Spin(s) => {
            if s.cycle().len() != g.num_edges() {
                return Err(Error::Input("spin structure is not defined over this graph".into()));
            }
            Box::new(move |a: &Automorphism| Ok(a.act_on_spin(g, s)? == *s))
        }
        AutRestriction::Pbar(p) => {
            crate::cycles::require_cyclic(g, p)?;
            let component = g.components_of(p);
            let removed = p.complement();
            Box::new(move |a: &Automorphism| {
                Ok((0..g.num_vertices()).all(|v| component[a.vertices[v]] == component[v])
                    && removed.iter().all(|e| g.edge_half_edges(e).iter().all(|&h| a.half_edges[h] == h)))
            })
        }
    };
    let mut elements = Vec::new();
    for sigma in &sigmas {
        for a in lifts(g, &layout, sigma) {
            debug_assert!(a.is_valid(g));
            if keep(&a)? {
                elements.push(a);
            }
        }
    }
    Ok(AutGroup::new(g, elements))
}
