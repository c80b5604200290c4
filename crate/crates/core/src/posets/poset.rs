use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::EdgeSet;
use crate::cycles::enumerate_cyclic;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::morphisms::{automorphisms, contract, cycle_key, graph_key, spin_key, AutRestriction, CanonicalKey};
use crate::spin::{enumerate_spin, Parity, SpinGraph, SpinStructure};

use super::enumerate::{enumerate_stable_graphs, Budget, GraphClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PosetKind {
    Graphs,
    Cyclic,
    Spin,
}

impl std::str::FromStr for PosetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graphs" => Ok(PosetKind::Graphs),
            "cyclic" => Ok(PosetKind::Cyclic),
            "spin" => Ok(PosetKind::Spin),
            _ => Err(Error::Input(format!("unknown poset kind '{s}' (graphs, cyclic, spin)"))),
        }
    }
}

/// An isomorphism class: a graph, possibly decorated by a cyclic set or a
/// spin structure.
#[derive(Clone, Debug)]
pub struct IsoClass {
    pub key: CanonicalKey,
    pub rank: usize,
    pub graph: Graph,
    /// Index of the underlying graph class in the `S_{g,n}` list.
    pub graph_class: usize,
    pub cycle: Option<EdgeSet>,
    pub spin: Option<SpinStructure>,
    /// Number of decorations on the representative graph in this class.
    pub orbit_size: usize,
}

impl IsoClass {
    pub fn parity(&self) -> Option<Parity> {
        self.spin.as_ref().map(SpinStructure::parity)
    }

    pub fn spin_graph(&self) -> Option<SpinGraph> {
        self.spin.as_ref().map(|s| SpinGraph { graph: self.graph.clone(), spin: s.clone() })
    }
}

#[derive(Clone, Debug)]
pub struct Poset {
    pub kind: PosetKind,
    pub g: u32,
    pub n: usize,
    pub graphs: Vec<GraphClass>,
    pub nodes: Vec<IsoClass>,
    /// `(upper, lower)` pairs.
    pub covers: Vec<(usize, usize)>,
    index: HashMap<CanonicalKey, usize>,
}

fn key_of(kind: PosetKind, g: &Graph, cycle: Option<&EdgeSet>, spin: Option<&SpinStructure>) -> CanonicalKey {
    match kind {
        PosetKind::Graphs => graph_key(g),
        PosetKind::Cyclic => cycle_key(g, cycle.expect("cycle")),
        PosetKind::Spin => spin_key(g, spin.expect("spin")),
    }
}

/// Classes over one graph, one per `Aut(G)`-orbit.
fn classes_over(kind: PosetKind, index: usize, class: &GraphClass, budget: &Budget) -> Result<Vec<IsoClass>> {
    let g = &class.graph;
    let make = |cycle: Option<EdgeSet>, spin: Option<SpinStructure>, orbit_size: usize| IsoClass {
        key: key_of(kind, g, cycle.as_ref(), spin.as_ref()),
        rank: g.num_edges(),
        graph: g.clone(),
        graph_class: index,
        cycle,
        spin,
        orbit_size,
    };
    match kind {
        PosetKind::Graphs => Ok(vec![make(None, None, 1)]),
        PosetKind::Cyclic => {
            let mut by_key: BTreeMap<CanonicalKey, (EdgeSet, usize)> = BTreeMap::new();
            for p in enumerate_cyclic(g, budget.b1_cap)? {
                by_key.entry(cycle_key(g, &p)).or_insert((p, 0)).1 += 1;
            }
            Ok(by_key.into_values().map(|(p, size)| make(Some(p), None, size)).collect())
        }
        PosetKind::Spin => {
            let spins = enumerate_spin(g, budget.b1_cap)?;
            let group = automorphisms(g, AutRestriction::None)?;
            let orbits = group.spin_orbits(g, &spins)?;
            let mut out: Vec<IsoClass> = orbits
                .iter()
                .map(|orbit| {
                    let s = spins[orbit[0]].clone();
                    make(Some(*s.cycle()), Some(s), orbit.len())
                })
                .collect();
            // orbits under Aut(G) and spin keys must induce the same partition
            let distinct: BTreeSet<&CanonicalKey> = out.iter().map(|c| &c.key).collect();
            if distinct.len() != out.len() {
                return Err(Error::verification(
                    format!("graph {}", class.key),
                    "two Aut(G)-orbits of spin structures share a canonical key",
                ));
            }
            for orbit in &orbits {
                if orbit.iter().any(|&i| spin_key(g, &spins[i]) != spin_key(g, &spins[orbit[0]])) {
                    return Err(Error::verification(
                        format!("graph {}", class.key),
                        "an Aut(G)-orbit of spin structures has two canonical keys",
                    ));
                }
            }
            out.sort_by(|a, b| a.key.cmp(&b.key));
            Ok(out)
        }
    }
}

impl Poset {
    pub fn build(kind: PosetKind, g: u32, n: usize, graphs: Vec<GraphClass>, budget: &Budget) -> Result<Poset> {
        let per_graph: Vec<Result<Vec<IsoClass>>> =
            graphs.par_iter().enumerate().map(|(i, c)| classes_over(kind, i, c, budget)).collect();
        let mut nodes = Vec::new();
        for r in per_graph {
            nodes.extend(r?);
        }
        nodes.sort_by(|a, b| (a.rank, a.graph_class, &a.key).cmp(&(b.rank, b.graph_class, &b.key)));
        let index: HashMap<CanonicalKey, usize> = nodes.iter().enumerate().map(|(i, c)| (c.key.clone(), i)).collect();
        if index.len() != nodes.len() {
            return Err(Error::verification(format!("poset ({g}, {n})"), "duplicate canonical keys"));
        }
        let lower: Vec<Result<Vec<(usize, usize)>>> = nodes
            .par_iter()
            .enumerate()
            .map(|(i, node)| {
                let mut out = BTreeSet::new();
                for e in 0..node.rank {
                    let c = contract(&node.graph, &EdgeSet::from_indices(node.rank, [e])?)?;
                    let cycle = node.cycle.map(|p| c.push_cycle(&p)).transpose()?;
                    let spin = node.spin.as_ref().map(|s| c.push_spin(s)).transpose()?;
                    let key = key_of(kind, &c.target, cycle.as_ref(), spin.as_ref());
                    let j = *index.get(&key).ok_or_else(|| {
                        Error::verification(
                            format!("class {}", node.key),
                            format!("contracting edge {e} leaves the enumerated poset"),
                        )
                    })?;
                    out.insert((i, j));
                }
                Ok(out.into_iter().collect())
            })
            .collect();
        let mut covers = Vec::new();
        for r in lower {
            covers.extend(r?);
        }
        Ok(Poset { kind, g, n, graphs, nodes, covers, index })
    }

    pub fn index_of(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn top_rank(&self) -> usize {
        (3 * self.g as i64 - 3 + self.n as i64).max(0) as usize
    }

    pub fn lower_covers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for &(u, l) in &self.covers {
            out[u].push(l);
        }
        out
    }

    pub fn upper_covers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for &(u, l) in &self.covers {
            out[l].push(u);
        }
        out
    }

    /// `below[i]` contains `j` iff node `i` ≥ node `j` in the transitive
    /// closure of the covers (reflexive).
    pub fn down_sets(&self) -> Vec<Vec<u64>> {
        let words = self.nodes.len().div_ceil(64).max(1);
        let mut below = vec![vec![0u64; words]; self.nodes.len()];
        let lower = self.lower_covers();
        // nodes are sorted by rank, covers go one rank down
        for i in 0..self.nodes.len() {
            below[i][i / 64] |= 1 << (i % 64);
            for &j in &lower[i] {
                debug_assert!(j < i);
                let (head, tail) = below.split_at_mut(i);
                for (a, b) in tail[0].iter_mut().zip(&head[j]) {
                    *a |= *b;
                }
            }
        }
        below
    }

    pub fn rank_histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.top_rank() + 1];
        for node in &self.nodes {
            if node.rank >= h.len() {
                h.resize(node.rank + 1, 0);
            }
            h[node.rank] += 1;
        }
        h
    }

    /// Connected components of the cover graph, labeled by smallest node.
    pub fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.covers {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
        let mut label = HashMap::new();
        (0..self.nodes.len())
            .map(|i| {
                let r = find(&mut parent, i);
                let next = label.len();
                *label.entry(r).or_insert(next)
            })
            .collect()
    }
}

pub fn build_poset(kind: PosetKind, g: u32, n: usize, budget: &Budget) -> Result<Poset> {
    let graphs = enumerate_stable_graphs(g, n, budget)?;
    Poset::build(kind, g, n, graphs, budget)
}

pub fn build_spin_poset(g: u32, n: usize, budget: &Budget) -> Result<Poset> {
    build_poset(PosetKind::Spin, g, n, budget)
}

#[derive(Clone, Debug, Serialize)]
pub struct PosetStats {
    pub kind: PosetKind,
    pub nodes: usize,
    pub covers: usize,
    pub components: usize,
    pub component_sizes: Vec<usize>,
    /// Spin posets: number of components meeting each parity class.
    pub parity_components: BTreeMap<String, usize>,
    pub graded: bool,
    pub rank_histogram: Vec<usize>,
    /// Nodes of rank 0.
    pub minima: Vec<usize>,
    /// Every node lies below a node of top rank.
    pub pure: bool,
}

/// Structural statistics plus the checks every moduli poset must pass:
/// gradedness, minima over the single-vertex graph, purity, the expected
/// number of components (one per parity for spin posets of positive genus),
/// and that every node of top rank lies over a 3-regular graph.
pub fn poset_stats(p: &Poset) -> Result<PosetStats> {
    let witness = |i: usize| format!("class {}", p.nodes[i].key);
    for &(u, l) in &p.covers {
        if p.nodes[u].rank != p.nodes[l].rank + 1 {
            return Err(Error::verification(witness(u), "cover between non-consecutive ranks"));
        }
    }
    let lower = p.lower_covers();
    let minima: Vec<usize> = (0..p.nodes.len()).filter(|&i| p.nodes[i].rank == 0).collect();
    for i in 0..p.nodes.len() {
        if p.nodes[i].rank > 0 && lower[i].is_empty() {
            return Err(Error::verification(witness(i), "positive rank but no lower cover"));
        }
    }
    for &m in &minima {
        let gr = &p.nodes[m].graph;
        if gr.num_vertices() != 1 || gr.weight(0) != p.g || gr.num_legs() != p.n {
            return Err(Error::verification(witness(m), "rank-0 node is not the single vertex of weight g"));
        }
    }
    let top = p.top_rank();
    for (i, node) in p.nodes.iter().enumerate() {
        if node.rank == top && !node.graph.is_three_regular() {
            return Err(Error::verification(witness(i), "top-rank node over a graph that is not 3-regular"));
        }
    }
    let upper = p.upper_covers();
    let mut reaches_top = vec![false; p.nodes.len()];
    for i in (0..p.nodes.len()).rev() {
        reaches_top[i] = p.nodes[i].rank == top || upper[i].iter().any(|&u| reaches_top[u]);
    }
    let pure = reaches_top.iter().all(|&x| x);
    if !pure {
        let i = reaches_top.iter().position(|&x| !x).unwrap();
        return Err(Error::verification(witness(i), "not below any node of top rank"));
    }
    let comps = p.components();
    let count = comps.iter().max().map_or(0, |m| m + 1);
    let mut component_sizes = vec![0; count];
    for &c in &comps {
        component_sizes[c] += 1;
    }
    let mut parity_components: BTreeMap<String, usize> = BTreeMap::new();
    if p.kind == PosetKind::Spin {
        let mut seen: BTreeSet<(Parity, usize)> = BTreeSet::new();
        for (i, node) in p.nodes.iter().enumerate() {
            seen.insert((node.parity().expect("spin node"), comps[i]));
        }
        for (parity, _) in &seen {
            *parity_components.entry(parity.to_string()).or_insert(0) += 1;
        }
        let expected = if p.g > 0 { 2 } else { 1 };
        if count != expected || parity_components.values().any(|&c| c != 1) || parity_components.len() != expected {
            return Err(Error::verification(
                format!("spin poset ({}, {})", p.g, p.n),
                format!("{count} components, parity classes {parity_components:?}"),
            ));
        }
        if minima.len() != expected {
            return Err(Error::verification(format!("spin poset ({}, {})", p.g, p.n), "wrong number of minima"));
        }
    } else if count != 1 || minima.len() != 1 {
        return Err(Error::verification(format!("{:?} poset ({}, {})", p.kind, p.g, p.n), "not connected with a unique minimum"));
    }
    Ok(PosetStats {
        kind: p.kind,
        nodes: p.nodes.len(),
        covers: p.covers.len(),
        components: count,
        component_sizes,
        parity_components,
        graded: true,
        rank_histogram: p.rank_histogram(),
        minima,
        pure,
    })
}

/// Checks that `[SP⁺] → [C] → S` (forget the signs, then the cycle) are
/// monotone surjections: every cover maps to a cover or an equality.
pub fn check_forgetful_maps(spin: &Poset, cyclic: &Poset, graphs: &Poset) -> Result<()> {
    let maps_to = |from: &Poset, to: &Poset, key_fn: &dyn Fn(&IsoClass) -> CanonicalKey| -> Result<Vec<Option<usize>>> {
        let mut image = vec![false; to.nodes.len()];
        let map: Vec<Option<usize>> = from
            .nodes
            .iter()
            .map(|node| {
                if node.parity() == Some(Parity::Odd) {
                    return Ok(None);
                }
                let j = to.index_of(&key_fn(node)).ok_or_else(|| {
                    Error::verification(format!("class {}", node.key), "image missing from the target poset")
                })?;
                image[j] = true;
                Ok(Some(j))
            })
            .collect::<Result<_>>()?;
        if let Some(j) = image.iter().position(|&x| !x) {
            return Err(Error::verification(format!("class {}", to.nodes[j].key), "forgetful map misses this class"));
        }
        let target_lower = to.lower_covers();
        for &(u, l) in &from.covers {
            if let (Some(a), Some(b)) = (map[u], map[l]) {
                if a != b && !target_lower[a].contains(&b) {
                    return Err(Error::verification(format!("class {}", from.nodes[u].key), "forgetful map is not monotone"));
                }
            }
        }
        Ok(map)
    };
    maps_to(spin, cyclic, &|n| cycle_key(&n.graph, n.cycle.as_ref().expect("cycle")))?;
    maps_to(cyclic, graphs, &|n| graph_key(&n.graph))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_poset_1_1() {
        let p = build_spin_poset(1, 1, &Budget::default()).unwrap();
        assert_eq!(p.nodes.len(), 5);
        let stats = poset_stats(&p).unwrap();
        assert_eq!(stats.components, 2);
        let mut sizes = stats.component_sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![2, 3]);
        let even = p.nodes.iter().filter(|n| n.parity() == Some(Parity::Even)).count();
        assert_eq!(even, 3);
    }

    #[test]
    fn spin_poset_2_0_maximal_cells() {
        let p = build_spin_poset(2, 0, &Budget::default()).unwrap();
        let top: Vec<&IsoClass> = p.nodes.iter().filter(|n| n.rank == 3).collect();
        assert_eq!(top.len(), 9);
        assert_eq!(top.iter().filter(|n| n.parity() == Some(Parity::Even)).count(), 6);
        poset_stats(&p).unwrap();
    }

    #[test]
    fn genus_zero_is_trivial() {
        let p = build_spin_poset(0, 3, &Budget::default()).unwrap();
        assert_eq!(p.nodes.len(), 1);
        let stats = poset_stats(&p).unwrap();
        assert_eq!(stats.components, 1);
    }

    #[test]
    fn graph_poset_2_0() {
        let p = build_poset(PosetKind::Graphs, 2, 0, &Budget::default()).unwrap();
        let stats = poset_stats(&p).unwrap();
        assert_eq!(stats.nodes, 7);
        assert_eq!(stats.rank_histogram.len(), 4);
        assert_eq!(stats.components, 1);
    }

    #[test]
    fn forgetful_maps_2_0() {
        let b = Budget::default();
        let s = build_poset(PosetKind::Spin, 2, 0, &b).unwrap();
        let c = build_poset(PosetKind::Cyclic, 2, 0, &b).unwrap();
        let g = build_poset(PosetKind::Graphs, 2, 0, &b).unwrap();
        poset_stats(&c).unwrap();
        check_forgetful_maps(&s, &c, &g).unwrap();
    }
}
