//! Weighted graphs with ordered legs, in half-edge form.
//!
//! A graph is a set of vertices with nonnegative weights, a set of half-edges
//! each attached to a vertex, and an involution on the half-edges. Swapped
//! pairs are edges; fixed points are legs. Half-edge ids are dense and every
//! edge is identified with its smaller half-edge id, so edges are indexed by
//! the order of that id. Legs are ordered (marked points).

use std::collections::BTreeMap;

use crate::bitset::{EdgeSet, VertexSet, MAX_BITS};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    weights: Vec<u32>,
    endpoint: Vec<usize>,
    involution: Vec<usize>,
    legs: Vec<usize>,
    edges: Vec<[usize; 2]>,
    edge_of: Vec<Option<usize>>,
}

/// An integer divisor on the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Divisor(pub Vec<i64>);

impl Divisor {
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }
}

/// Structural classification of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Every vertex has even degree (legs not counted).
    pub eulerian: bool,
    pub three_regular: bool,
    pub basic: bool,
    /// `(w(v), loop(v) + w(v))` for each vertex; only filled for basic graphs.
    pub vertex_classes: Option<Vec<(u32, u32)>>,
}

/// A blow-up: the graph with a weight-0 vertex inserted in each chosen edge.
#[derive(Clone, Debug)]
pub struct BlowUp {
    pub graph: Graph,
    /// `exceptional[i]` is the vertex inserted into the i-th blown-up edge.
    pub exceptional: Vec<usize>,
    /// For each edge of the original graph, the edges of the blow-up over it.
    pub edges_over: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from raw half-edge data, validating every invariant.
    pub fn from_half_edges(
        weights: Vec<u32>,
        endpoint: Vec<usize>,
        involution: Vec<usize>,
        legs: Vec<usize>,
    ) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Input("a graph needs at least one vertex".into()));
        }
        if weights.len() > MAX_BITS {
            return Err(Error::Input(format!("more than {MAX_BITS} vertices")));
        }
        let nh = endpoint.len();
        if involution.len() != nh {
            return Err(Error::Input("endpoint and involution lengths differ".into()));
        }
        if let Some(&v) = endpoint.iter().find(|&&v| v >= weights.len()) {
            return Err(Error::Input(format!("half-edge attached to unknown vertex {v}")));
        }
        for (h, &j) in involution.iter().enumerate() {
            if j >= nh || involution[j] != h {
                return Err(Error::Input(format!("involution is not self-inverse at half-edge {h}")));
            }
        }
        let mut seen = vec![false; nh];
        for &l in &legs {
            if l >= nh || involution[l] != l {
                return Err(Error::Input(format!("leg {l} is not a fixed point of the involution")));
            }
            if std::mem::replace(&mut seen[l], true) {
                return Err(Error::Input(format!("leg {l} listed twice")));
            }
        }
        if let Some(h) = (0..nh).find(|&h| involution[h] == h && !seen[h]) {
            return Err(Error::Input(format!("fixed half-edge {h} missing from the leg list")));
        }
        let mut edges = Vec::new();
        let mut edge_of = vec![None; nh];
        for h in 0..nh {
            let j = involution[h];
            if h < j {
                edge_of[h] = Some(edges.len());
                edge_of[j] = Some(edges.len());
                edges.push([h, j]);
            }
        }
        if edges.len() > MAX_BITS {
            return Err(Error::Input(format!("more than {MAX_BITS} edges")));
        }
        Ok(Graph { weights, endpoint, involution, legs, edges, edge_of })
    }

    /// Builds a graph from an edge list and the ordered list of leg vertices.
    ///
    /// Edge `i` receives half-edges `2i` (at `u`) and `2i + 1` (at `v`); legs
    /// follow in order. Loops are given as `(v, v)`.
    pub fn new(weights: Vec<u32>, edges: &[(usize, usize)], legs: &[usize]) -> Result<Self> {
        let mut endpoint = Vec::with_capacity(2 * edges.len() + legs.len());
        let mut involution = Vec::with_capacity(endpoint.capacity());
        for &(u, v) in edges {
            let h = endpoint.len();
            endpoint.extend([u, v]);
            involution.extend([h + 1, h]);
        }
        let mut leg_ids = Vec::with_capacity(legs.len());
        for &v in legs {
            let h = endpoint.len();
            endpoint.push(v);
            involution.push(h);
            leg_ids.push(h);
        }
        Self::from_half_edges(weights, endpoint, involution, leg_ids)
    }

    /// The graph `G_{g,n}`: one vertex of weight `g` carrying `n` legs.
    pub fn single_vertex(weight: u32, legs: usize) -> Self {
        Self::new(vec![weight], &[], &vec![0; legs]).expect("single vertex graph is valid")
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.endpoint.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn total_weight(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn endpoint(&self, h: usize) -> usize {
        self.endpoint[h]
    }

    pub fn involution(&self, h: usize) -> usize {
        self.involution[h]
    }

    pub fn endpoints(&self) -> &[usize] {
        &self.endpoint
    }

    pub fn involution_map(&self) -> &[usize] {
        &self.involution
    }

    /// Leg half-edge ids in marked-point order.
    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    /// The vertex carrying each leg, in leg order.
    pub fn leg_vertices(&self) -> Vec<usize> {
        self.legs.iter().map(|&h| self.endpoint[h]).collect()
    }

    pub fn is_leg(&self, h: usize) -> bool {
        self.involution[h] == h
    }

    /// Edge index of a non-leg half-edge.
    pub fn edge_of(&self, h: usize) -> Option<usize> {
        self.edge_of[h]
    }

    /// The two half-edges of edge `e`, smaller id first.
    pub fn edge_half_edges(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    /// Endpoints of edge `e`, ordered as its half-edges.
    pub fn edge_ends(&self, e: usize) -> (usize, usize) {
        let [h, j] = self.edges[e];
        (self.endpoint[h], self.endpoint[j])
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (u, v) = self.edge_ends(e);
        u == v
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.num_edges())
    }

    pub fn no_edges(&self) -> EdgeSet {
        EdgeSet::empty(self.num_edges())
    }

    pub fn edge_set<I: IntoIterator<Item = usize>>(&self, edges: I) -> Result<EdgeSet> {
        EdgeSet::from_indices(self.num_edges(), edges)
    }

    pub fn half_edges_at(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_half_edges()).filter(move |&h| self.endpoint[h] == v)
    }

    /// Number of non-leg half-edges at `v` (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.half_edges_at(v).filter(|&h| !self.is_leg(h)).count()
    }

    /// Number of legs at `v`.
    pub fn legs_at(&self, v: usize) -> usize {
        self.half_edges_at(v).filter(|&h| self.is_leg(h)).count()
    }

    pub fn loops_at(&self, v: usize) -> usize {
        (0..self.num_edges())
            .filter(|&e| self.edge_ends(e) == (v, v))
            .count()
    }

    /// Degree of `v` in the subgraph spanned by `f`.
    pub fn degree_in(&self, v: usize, f: &EdgeSet) -> usize {
        f.iter()
            .map(|e| {
                let (a, b) = self.edge_ends(e);
                (a == v) as usize + (b == v) as usize
            })
            .sum()
    }

    /// Component label of each vertex in the spanning subgraph with edge set
    /// `f`; labels are ordered by the smallest vertex of each component.
    pub fn components_of(&self, f: &EdgeSet) -> Vec<usize> {
        let n = self.num_vertices();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in f.iter() {
            let (a, b) = self.edge_ends(e);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0; n];
        for v in 0..n {
            let r = find(&mut parent, v);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[v] = label[r];
        }
        out
    }

    pub fn components(&self) -> Vec<usize> {
        self.components_of(&self.all_edges())
    }

    pub fn num_components(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    /// First Betti number of the spanning subgraph with edge set `f`.
    pub fn b1_of(&self, f: &EdgeSet) -> usize {
        let c = self.components_of(f).into_iter().max().map_or(0, |m| m + 1);
        f.count() + c - self.num_vertices()
    }

    pub fn b1(&self) -> usize {
        self.b1_of(&self.all_edges())
    }

    /// `Σ w(v) + |E| − |V| + c(G)`.
    pub fn genus(&self) -> u32 {
        self.total_weight() + self.b1() as u32
    }

    fn stability_value(&self, v: usize) -> i64 {
        2 * self.weights[v] as i64 - 2 + self.degree(v) as i64 + self.legs_at(v) as i64
    }

    pub fn is_stable(&self) -> bool {
        self.is_connected() && (0..self.num_vertices()).all(|v| self.stability_value(v) > 0)
    }

    pub fn is_semistable(&self) -> bool {
        self.is_connected() && (0..self.num_vertices()).all(|v| self.stability_value(v) >= 0)
    }

    /// `(k_G)_v = 2w(v) − 2 + deg(v)`.
    pub fn canonical_divisor(&self) -> Divisor {
        Divisor(
            (0..self.num_vertices())
                .map(|v| 2 * self.weights[v] as i64 - 2 + self.degree(v) as i64)
                .collect(),
        )
    }

    fn check_edges(&self, f: &EdgeSet) -> Result<()> {
        if f.len() != self.num_edges() {
            return Err(Error::Input(format!(
                "edge set of width {} used on a graph with {} edges",
                f.len(),
                self.num_edges()
            )));
        }
        Ok(())
    }

    /// `G − F` (`open = false`) or `G − F°` (`open = true`).
    ///
    /// Open removal keeps every half-edge id and turns the half-edges of `F`
    /// into legs appended after the existing ones, ordered by removed edge
    /// index and then by half-edge id. Closed removal drops those half-edges
    /// and renumbers the survivors in their original order.
    pub fn remove_edges(&self, f: &EdgeSet, open: bool) -> Result<Graph> {
        self.check_edges(f)?;
        if open {
            let mut involution = self.involution.clone();
            let mut legs = self.legs.clone();
            for e in f.iter() {
                for h in self.edges[e] {
                    involution[h] = h;
                    legs.push(h);
                }
            }
            return Graph::from_half_edges(self.weights.clone(), self.endpoint.clone(), involution, legs);
        }
        let keep: Vec<usize> = (0..self.num_half_edges())
            .filter(|&h| self.edge_of[h].map_or(true, |e| !f.contains(e)))
            .collect();
        self.restrict_half_edges(&keep, &(0..self.num_vertices()).collect::<Vec<_>>())
    }

    /// The subgraph on `vertices` (renumbered in the given order) keeping the
    /// half-edges in `keep` (renumbered in the given order). Every kept
    /// half-edge must be attached to a kept vertex and be closed under the
    /// involution.
    pub(crate) fn restrict_half_edges(&self, keep: &[usize], vertices: &[usize]) -> Result<Graph> {
        let mut vnew = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in vertices.iter().enumerate() {
            vnew[v] = i;
        }
        let mut hnew = vec![usize::MAX; self.num_half_edges()];
        for (i, &h) in keep.iter().enumerate() {
            hnew[h] = i;
        }
        let endpoint = keep.iter().map(|&h| vnew[self.endpoint[h]]).collect();
        let involution = keep.iter().map(|&h| hnew[self.involution[h]]).collect();
        let legs = self
            .legs
            .iter()
            .filter(|&&h| hnew[h] != usize::MAX)
            .map(|&h| hnew[h])
            .collect();
        let weights = vertices.iter().map(|&v| self.weights[v]).collect();
        Graph::from_half_edges(weights, endpoint, involution, legs)
    }

    /// The connected component containing the vertices in `vertices`, as a
    /// standalone graph with inherited legs (leg order preserved).
    pub fn induced_component(&self, vertices: &VertexSet) -> Result<Graph> {
        let vs: Vec<usize> = vertices.iter().collect();
        let keep: Vec<usize> = (0..self.num_half_edges())
            .filter(|&h| vertices.contains(self.endpoint[h]))
            .collect();
        for &h in &keep {
            if !vertices.contains(self.endpoint[self.involution[h]]) {
                return Err(Error::Input("vertex set is not a union of components".into()));
            }
        }
        self.restrict_half_edges(&keep, &vs)
    }

    /// `Ĝ_R`: every edge of `R` is subdivided by a new weight-0 vertex.
    ///
    /// Edge `{h, h'}` in `R` becomes `{h, a}` and `{b, h'}` where `a`, `b` are
    /// new half-edges at the exceptional vertex, appended after the existing
    /// ones. Original half-edge ids are unchanged.
    pub fn blow_up(&self, r: &EdgeSet) -> Result<BlowUp> {
        self.check_edges(r)?;
        let mut weights = self.weights.clone();
        let mut endpoint = self.endpoint.clone();
        let mut involution = self.involution.clone();
        let mut exceptional = Vec::new();
        for e in r.iter() {
            let [h, j] = self.edges[e];
            let x = weights.len();
            weights.push(0);
            exceptional.push(x);
            let a = endpoint.len();
            let b = a + 1;
            endpoint.extend([x, x]);
            involution.extend([h, j]);
            involution[h] = a;
            involution[j] = b;
        }
        let graph = Graph::from_half_edges(weights, endpoint, involution, self.legs.clone())?;
        let edges_over = (0..self.num_edges())
            .map(|e| {
                let [h, j] = self.edges[e];
                let mut over = vec![graph.edge_of(h).expect("edge half-edge")];
                if r.contains(e) {
                    over.push(graph.edge_of(j).expect("edge half-edge"));
                }
                over
            })
            .collect();
        Ok(BlowUp { graph, exceptional, edges_over })
    }

    pub fn is_eulerian(&self) -> bool {
        (0..self.num_vertices()).all(|v| self.degree(v) % 2 == 0)
    }

    pub fn is_three_regular(&self) -> bool {
        (0..self.num_vertices()).all(|v| self.weights[v] == 0 && self.degree(v) + self.legs_at(v) == 3)
    }

    /// Genus ≥ 2, at least one edge, all degrees even, weights ≤ 1, and
    /// `w + deg + ℓ ≤ 4` at every vertex with equality only where a loop sits.
    pub fn is_basic(&self) -> bool {
        self.genus() >= 2
            && self.num_edges() > 0
            && self.is_eulerian()
            && (0..self.num_vertices()).all(|v| {
                let total = self.weights[v] as usize + self.degree(v) + self.legs_at(v);
                self.weights[v] <= 1 && (total < 4 || (total == 4 && self.loops_at(v) >= 1))
            })
    }

    pub fn classify(&self) -> Classification {
        let basic = self.is_basic();
        let vertex_classes = basic.then(|| {
            (0..self.num_vertices())
                .map(|v| (self.weights[v], self.weights[v] + self.loops_at(v) as u32))
                .collect()
        });
        Classification {
            eulerian: self.is_eulerian(),
            three_regular: self.is_three_regular(),
            basic,
            vertex_classes,
        }
    }

    /// Edge multiplicities between vertex pairs `(u, v)` with `u ≤ v`.
    pub fn multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for e in 0..self.num_edges() {
            let (a, b) = self.edge_ends(e);
            *m.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    #[test]
    fn genus_of_fixtures() {
        assert_eq!(theta().genus(), 2);
        assert_eq!(Graph::single_vertex(3, 2).genus(), 3);
        assert_eq!(dumbbell().genus(), 2);
    }

    #[test]
    fn stability_examples() {
        assert!(theta().is_stable());
        let bare_loop = Graph::new(vec![0], &[(0, 0)], &[]).unwrap();
        assert!(!bare_loop.is_stable());
        assert!(bare_loop.is_semistable());
        assert!(loop_with_leg().is_stable());
    }

    #[test]
    fn canonical_divisor_examples() {
        let k = theta().canonical_divisor();
        assert_eq!(k.values(), &[1, 1]);
        assert_eq!(k.degree(), 2);
        assert_eq!(Graph::single_vertex(3, 0).canonical_divisor().values(), &[4]);
        assert_eq!(dumbbell().canonical_divisor().values(), &[1, 1]);
    }

    #[test]
    fn open_removal_on_theta() {
        let g = theta();
        let f = g.edge_set([2]).unwrap();
        let h = g.remove_edges(&f, true).unwrap();
        assert_eq!(h.num_vertices(), 2);
        assert_eq!(h.num_edges(), 2);
        assert_eq!(h.num_legs(), 2);
        assert_eq!(h.legs(), &[4, 5]);
    }

    #[test]
    fn removing_nothing_is_identity() {
        for g in [theta(), dumbbell(), loop_with_leg()] {
            assert_eq!(g.remove_edges(&g.no_edges(), true).unwrap(), g);
            assert_eq!(g.remove_edges(&g.no_edges(), false).unwrap(), g);
        }
    }

    #[test]
    fn open_removal_on_dumbbell() {
        // edges: 0 = l1 at u, 1 = bridge, 2 = l2 at v
        let g = dumbbell();
        let f = g.edge_set([1, 2]).unwrap();
        let h = g.remove_edges(&f, true).unwrap();
        assert_eq!(h.num_legs(), g.num_legs() + 2 * f.count());
        let comps = h.components();
        assert_eq!(comps, vec![0, 1]);
        let u = h.induced_component(&VertexSet::from_indices(2, [0]).unwrap()).unwrap();
        let v = h.induced_component(&VertexSet::from_indices(2, [1]).unwrap()).unwrap();
        assert_eq!((u.num_edges(), u.num_legs(), u.loops_at(0)), (1, 1, 1));
        assert_eq!((v.num_edges(), v.num_legs()), (0, 3));
    }

    #[test]
    fn closed_removal_drops_half_edges() {
        let g = theta();
        let h = g.remove_edges(&g.edge_set([0]).unwrap(), false).unwrap();
        assert_eq!(h.num_half_edges(), 4);
        assert_eq!(h.num_legs(), 0);
        assert_eq!(h.num_edges(), 2);
    }

    #[test]
    fn removal_rejects_foreign_edge_set() {
        let g = theta();
        assert!(g.remove_edges(&EdgeSet::empty(5), true).is_err());
    }

    #[test]
    fn blow_up_examples() {
        let g = theta();
        let b = g.blow_up(&g.edge_set([2]).unwrap()).unwrap();
        assert_eq!(b.graph.num_vertices(), 3);
        assert_eq!(b.graph.num_edges(), 4);
        let x = b.exceptional[0];
        assert_eq!((b.graph.degree(x), b.graph.weight(x)), (2, 0));
        assert_eq!(b.graph.genus(), g.genus());

        assert_eq!(g.blow_up(&g.no_edges()).unwrap().graph, g);

        let l = loop_with_leg();
        let b = l.blow_up(&l.all_edges()).unwrap();
        assert_eq!(b.graph.num_vertices(), 2);
        assert_eq!(b.graph.num_edges(), 2);
        assert_eq!(b.graph.num_legs(), 1);
        assert_eq!(b.graph.multiplicities().get(&(0, 1)), Some(&2));
    }

    #[test]
    fn classify_examples() {
        let c = theta().classify();
        assert!(!c.eulerian && c.three_regular && !c.basic);

        let rose3 = rose(3, 0);
        let c = rose3.classify();
        assert!(c.eulerian && !c.basic);

        let c = rose(2, 0).classify();
        assert!(c.basic);
        assert_eq!(c.vertex_classes, Some(vec![(0, 2)]));
    }

    #[test]
    fn validation_catches_bad_involutions() {
        assert!(Graph::from_half_edges(vec![0], vec![0, 0], vec![1, 1], vec![]).is_err());
        assert!(Graph::from_half_edges(vec![0], vec![0], vec![0], vec![]).is_err());
        assert!(Graph::from_half_edges(vec![0], vec![1], vec![0], vec![0]).is_err());
        assert!(Graph::from_half_edges(vec![], vec![], vec![], vec![]).is_err());
    }
}
