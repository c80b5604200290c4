//! The GF(2) cycle space of a graph and the decomposition `P̄ = G − (E∖P)°`.

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::{EdgeSet, VertexSet};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on `b₁` for exhaustive cycle-space enumeration.
pub const DEFAULT_B1_CAP: usize = 24;

/// `∂F`: the GF(2) sum of the endpoints of the edges of `F`. Loops vanish.
pub fn boundary(g: &Graph, f: &EdgeSet) -> VertexSet {
    let mut out = VertexSet::empty(g.num_vertices());
    for e in f.iter() {
        let (u, v) = g.edge_ends(e);
        out.toggle(u);
        out.toggle(v);
    }
    out
}

pub fn is_cyclic(g: &Graph, f: &EdgeSet) -> bool {
    f.len() == g.num_edges() && boundary(g, f).is_empty()
}

/// Every vertex of `⟨F⟩` has even degree. Independent of [`boundary`].
pub fn has_even_degrees(g: &Graph, f: &EdgeSet) -> bool {
    (0..g.num_vertices()).all(|v| g.degree_in(v, f) % 2 == 0)
}

pub(crate) fn require_cyclic(g: &Graph, p: &EdgeSet) -> Result<()> {
    if p.len() != g.num_edges() {
        return Err(Error::Input(format!(
            "edge set of width {} on a graph with {} edges",
            p.len(),
            g.num_edges()
        )));
    }
    if !is_cyclic(g, p) {
        return Err(Error::Domain(format!("edge set {} is not cyclic", p.to_hex())));
    }
    Ok(())
}

/// A basis of `Ker ∂` made of fundamental cycles of a DFS spanning forest.
///
/// Half-edges are scanned in id order, so the basis is a deterministic
/// function of the edge indexing. Its length is `b₁(G)`.
pub fn cycle_basis(g: &Graph) -> Vec<EdgeSet> {
    let n = g.num_vertices();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for h in 0..g.num_half_edges() {
        if !g.is_leg(h) {
            incident[g.endpoint(h)].push(h);
        }
    }
    let mut parent_edge: Vec<Option<usize>> = vec![None; n];
    let mut parent: Vec<usize> = (0..n).collect();
    let mut visited = vec![false; n];
    let mut tree = g.no_edges();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &h in &incident[v] {
                let e = g.edge_of(h).expect("non-leg half-edge");
                let w = g.endpoint(g.involution(h));
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = v;
                    parent_edge[w] = Some(e);
                    tree.insert(e);
                    stack.push(w);
                }
            }
        }
    }
    let path_to_root = |mut v: usize| {
        let mut set = g.no_edges();
        while let Some(e) = parent_edge[v] {
            set.insert(e);
            v = parent[v];
        }
        set
    };
    (0..g.num_edges())
        .filter(|&e| !tree.contains(e))
        .map(|e| {
            let (u, v) = g.edge_ends(e);
            let mut c = path_to_root(u).xor(&path_to_root(v));
            c.insert(e);
            c
        })
        .collect()
}

/// All `2^{b₁}` cyclic edge sets, sorted by bitmask (so `∅` comes first).
pub fn enumerate_cyclic(g: &Graph, cap: usize) -> Result<Vec<EdgeSet>> {
    let basis = cycle_basis(g);
    let b = basis.len();
    if b > cap {
        return Err(Error::Budget(format!("b1 = {b} exceeds the cycle-space cap {cap}")));
    }
    let span = |coeffs: u64| {
        basis
            .iter()
            .enumerate()
            .filter(|(i, _)| coeffs >> i & 1 == 1)
            .fold(g.no_edges(), |acc, (_, c)| acc.xor(c))
    };
    let total = 1u64 << b;
    let mut out: Vec<EdgeSet> = if b >= 16 {
        (0..total).into_par_iter().map(span).collect()
    } else {
        (0..total).map(span).collect()
    };
    out.sort();
    debug_assert!(out.iter().all(|f| has_even_degrees(g, f)));
    Ok(out)
}

/// One connected component `P̄_v` of `P̄`.
#[derive(Clone, Debug)]
pub struct PbarComponent {
    /// The component as a standalone graph; legs are inherited from `P̄`
    /// (original legs plus the halves of removed edges) in `P̄`'s leg order.
    pub graph: Graph,
    /// Vertices of the ambient graph covered by this component.
    pub vertices: VertexSet,
    pub genus: u32,
}

/// `P̄ = G − (E∖P)°` split into connected components.
///
/// Components are indexed by their smallest ambient vertex; the same order
/// labels the vertices of `G/P` produced by [`crate::morphisms::contract`].
#[derive(Clone, Debug)]
pub struct PbarDecomposition {
    pub cycle: EdgeSet,
    pub pbar: Graph,
    pub components: Vec<PbarComponent>,
    /// Component index of each ambient vertex.
    pub component_of: Vec<usize>,
    /// Number of positive-genus components.
    pub c_plus: usize,
}

impl PbarDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn genera(&self) -> Vec<u32> {
        self.components.iter().map(|c| c.genus).collect()
    }
}

#[derive(Serialize)]
struct ComponentSummary {
    vertices: Vec<usize>,
    genus: u32,
    legs: usize,
}

impl Serialize for PbarDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let comps: Vec<ComponentSummary> = self
            .components
            .iter()
            .map(|c| ComponentSummary {
                vertices: c.vertices.iter().collect(),
                genus: c.genus,
                legs: c.graph.num_legs(),
            })
            .collect();
        comps.serialize(s)
    }
}

pub fn pbar_decompose(g: &Graph, p: &EdgeSet) -> Result<PbarDecomposition> {
    require_cyclic(g, p)?;
    let removed = p.complement();
    let pbar = g.remove_edges(&removed, true)?;
    let component_of = g.components_of(p);
    let count = component_of.iter().max().map_or(0, |m| m + 1);
    let mut components = Vec::with_capacity(count);
    for c in 0..count {
        let vertices =
            VertexSet::from_indices(g.num_vertices(), (0..g.num_vertices()).filter(|&v| component_of[v] == c))?;
        let graph = pbar.induced_component(&vertices)?;
        let genus = graph.genus();
        components.push(PbarComponent { graph, vertices, genus });
    }
    let c_plus = components.iter().filter(|c| c.genus > 0).count();
    Ok(PbarDecomposition { cycle: *p, pbar, components, component_of, c_plus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    /// Brute force over all subsets: the kernel of ∂.
    fn kernel_by_brute_force(g: &Graph) -> Vec<EdgeSet> {
        let m = g.num_edges();
        (0..1u64 << m)
            .map(|bits| EdgeSet::from_bits(m, bits).unwrap())
            .filter(|f| boundary(g, f).is_empty())
            .collect()
    }

    fn rank(sets: &[EdgeSet]) -> usize {
        let mut rows: Vec<u64> = sets.iter().map(|s| s.bits()).collect();
        let mut r = 0;
        for bit in 0..64 {
            if let Some(i) = (r..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) {
                rows.swap(r, i);
                for j in 0..rows.len() {
                    if j != r && rows[j] >> bit & 1 == 1 {
                        rows[j] ^= rows[r];
                    }
                }
                r += 1;
            }
        }
        r
    }

    #[test]
    fn boundary_examples() {
        let t = theta();
        assert_eq!(boundary(&t, &t.edge_set([0]).unwrap()).iter().collect::<Vec<_>>(), vec![0, 1]);
        assert!(boundary(&t, &t.edge_set([0, 1]).unwrap()).is_empty());
        let d = dumbbell();
        assert!(boundary(&d, &d.edge_set([0]).unwrap()).is_empty());
    }

    #[test]
    fn basis_spans_the_brute_force_kernel() {
        for g in [theta(), dumbbell(), looped_double_edge(), quadruple_edge(), rose(3, 0)] {
            let basis = cycle_basis(&g);
            assert_eq!(basis.len(), g.b1());
            assert_eq!(rank(&basis), g.b1());
            let kernel = kernel_by_brute_force(&g);
            assert_eq!(enumerate_cyclic(&g, DEFAULT_B1_CAP).unwrap(), kernel);
        }
    }

    #[test]
    fn tree_has_empty_basis() {
        let path = Graph::new(vec![1, 0, 1], &[(0, 1), (1, 2)], &[]).unwrap();
        assert!(cycle_basis(&path).is_empty());
        assert_eq!(enumerate_cyclic(&path, 24).unwrap(), vec![path.no_edges()]);
    }

    #[test]
    fn dumbbell_basis_is_the_two_loops() {
        let d = dumbbell();
        let basis = cycle_basis(&d);
        assert_eq!(basis, vec![d.edge_set([0]).unwrap(), d.edge_set([2]).unwrap()]);
    }

    #[test]
    fn enumerations_match_frozen_values() {
        let t = theta();
        let got: Vec<Vec<usize>> = enumerate_cyclic(&t, 24).unwrap().iter().map(|f| f.iter().collect()).collect();
        assert_eq!(got, vec![vec![], vec![0, 1], vec![0, 2], vec![1, 2]]);
        let d = dumbbell();
        let got: Vec<Vec<usize>> = enumerate_cyclic(&d, 24).unwrap().iter().map(|f| f.iter().collect()).collect();
        assert_eq!(got, vec![vec![], vec![0], vec![2], vec![0, 2]]);
        assert_eq!(enumerate_cyclic(&weighted_vertex(3, 1), 24).unwrap().len(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(enumerate_cyclic(&rose(3, 0), 2), Err(Error::Budget(_))));
    }

    #[test]
    fn pbar_examples() {
        let t = theta();
        let d = pbar_decompose(&t, &t.edge_set([0, 1]).unwrap()).unwrap();
        assert_eq!((d.len(), d.c_plus), (1, 1));
        assert_eq!(d.genera(), vec![1]);
        assert_eq!(d.components[0].graph.num_legs(), 2);

        let d = pbar_decompose(&t, &t.no_edges()).unwrap();
        assert_eq!(d.genera(), vec![0, 0]);
        assert_eq!(d.c_plus, 0);
        assert!(d.components.iter().all(|c| c.graph.num_legs() == 3));

        let db = dumbbell();
        let d = pbar_decompose(&db, &db.edge_set([0, 2]).unwrap()).unwrap();
        assert_eq!(d.genera(), vec![1, 1]);
        assert_eq!(d.c_plus, 2);
    }

    #[test]
    fn pbar_rejects_non_cyclic() {
        let t = theta();
        assert!(matches!(pbar_decompose(&t, &t.edge_set([0]).unwrap()), Err(Error::Domain(_))));
    }
}
