use std::fmt;

use serde::{Serialize, Serializer};

use crate::bitset::EdgeSet;
use crate::graph::Graph;
use crate::spin::{SpinGraph, SpinStructure};

/// An isomorphism-invariant byte string. Keys of different decorations
/// (plain, cyclic, spin) never collide because of a leading tag.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    /// Last 12 hex digits, for labels (key prefixes are mostly shared headers).
    pub fn short(&self) -> String {
        let h = self.to_hex();
        h[h.len().saturating_sub(12)..].to_string()
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Key({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// A graph flattened into vertex colors and two multiplicity matrices: one
/// for edges in the distinguished set `P` and one for the rest.
pub(crate) struct Decorated {
    tag: u32,
    n: usize,
    weights: Vec<u32>,
    signs: Vec<u32>,
    leg_vertices: Vec<usize>,
    num_edges: usize,
    p: Vec<Vec<u32>>,
    r: Vec<Vec<u32>>,
}

impl Decorated {
    pub(crate) fn new(g: &Graph, cycle: Option<&EdgeSet>, spin: Option<&SpinStructure>, tag: u32) -> Self {
        let n = g.num_vertices();
        let mut p = vec![vec![0u32; n]; n];
        let mut r = vec![vec![0u32; n]; n];
        for e in 0..g.num_edges() {
            let (a, b) = g.edge_ends(e);
            let m = if cycle.is_some_and(|c| c.contains(e)) { &mut p } else { &mut r };
            m[a][b] += 1;
            if a != b {
                m[b][a] += 1;
            }
        }
        let signs = match (cycle, spin) {
            (Some(c), Some(s)) => {
                let comp = g.components_of(c);
                (0..n).map(|v| s.signs()[comp[v]] as u32).collect()
            }
            _ => vec![0; n],
        };
        Decorated {
            tag,
            n,
            weights: g.weights().to_vec(),
            signs,
            leg_vertices: g.leg_vertices(),
            num_edges: g.num_edges(),
            p,
            r,
        }
    }

    /// The encoding of the graph relabeled so that `order[i]` becomes vertex `i`.
    pub(crate) fn encode(&self, order: &[usize]) -> Vec<u32> {
        let mut position = vec![0; self.n];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut out = vec![self.tag, self.n as u32, self.leg_vertices.len() as u32, self.num_edges as u32];
        for &v in order {
            out.push(self.weights[v]);
            out.push(self.signs[v]);
        }
        out.extend(self.leg_vertices.iter().map(|&v| position[v] as u32));
        for i in 0..self.n {
            for j in i..self.n {
                out.push(self.p[order[i]][order[j]]);
                out.push(self.r[order[i]][order[j]]);
            }
        }
        out
    }

    fn initial_colors(&self) -> Vec<u32> {
        let mut legs_at: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (i, &v) in self.leg_vertices.iter().enumerate() {
            legs_at[v].push(i);
        }
        let signature: Vec<_> = (0..self.n)
            .map(|v| (self.weights[v], self.signs[v], self.p[v][v], self.r[v][v], legs_at[v].clone()))
            .collect();
        rank(&signature)
    }

    /// Color refinement to the coarsest equitable partition finer than `colors`.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut classes = count_classes(&colors);
        loop {
            let signature: Vec<(u32, Vec<(u32, u32, u32)>)> = (0..self.n)
                .map(|v| {
                    let mut nbrs: Vec<(u32, u32, u32)> = (0..self.n)
                        .filter(|&u| u != v && self.p[v][u] + self.r[v][u] > 0)
                        .map(|u| (colors[u], self.p[v][u], self.r[v][u]))
                        .collect();
                    nbrs.sort_unstable();
                    (colors[v], nbrs)
                })
                .collect();
            let next = rank(&signature);
            let next_classes = count_classes(&next);
            colors = next;
            if next_classes == classes {
                return colors;
            }
            classes = next_classes;
        }
    }

    fn search(&self, colors: Vec<u32>, best: &mut Option<Vec<u32>>) {
        let colors = self.refine(colors);
        let n = self.n;
        let mut cell_sizes = vec![0usize; n];
        for &c in &colors {
            cell_sizes[c as usize] += 1;
        }
        let Some(target) = (0..n).find(|&c| cell_sizes[c] > 1) else {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&v| colors[v]);
            let code = self.encode(&order);
            if best.as_ref().map_or(true, |b| code < *b) {
                *best = Some(code);
            }
            return;
        };
        for v in (0..n).filter(|&v| colors[v] as usize == target) {
            let split: Vec<(u32, u32)> =
                (0..n).map(|u| (colors[u], u32::from(colors[u] as usize == target && u != v))).collect();
            self.search(rank(&split), best);
        }
    }

    pub(crate) fn canonical_code(&self) -> Vec<u32> {
        let mut best = None;
        self.search(self.initial_colors(), &mut best);
        best.expect("search reaches at least one leaf")
    }
}

fn rank<T: Ord + Clone>(items: &[T]) -> Vec<u32> {
    let mut distinct: Vec<T> = items.to_vec();
    distinct.sort();
    distinct.dedup();
    items.iter().map(|x| distinct.binary_search(x).expect("present") as u32).collect()
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().max().map_or(0, |&m| m as usize + 1)
}

/// LEB128 bytes of the code.
fn to_key(code: &[u32]) -> CanonicalKey {
    let mut bytes = Vec::with_capacity(code.len());
    for &x in code {
        let mut x = x;
        loop {
            let byte = (x & 0x7f) as u8;
            x >>= 7;
            if x == 0 {
                bytes.push(byte);
                break;
            }
            bytes.push(byte | 0x80);
        }
    }
    CanonicalKey(bytes)
}

const TAG_GRAPH: u32 = 0;
const TAG_CYCLE: u32 = 1;
const TAG_SPIN: u32 = 2;

pub fn graph_key(g: &Graph) -> CanonicalKey {
    to_key(&Decorated::new(g, None, None, TAG_GRAPH).canonical_code())
}

/// Key of the pair `(G, P)` up to isomorphism of `G` carrying `P` to `P`.
pub fn cycle_key(g: &Graph, p: &EdgeSet) -> CanonicalKey {
    to_key(&Decorated::new(g, Some(p), None, TAG_CYCLE).canonical_code())
}

pub fn spin_key(g: &Graph, s: &SpinStructure) -> CanonicalKey {
    to_key(&Decorated::new(g, Some(s.cycle()), Some(s), TAG_SPIN).canonical_code())
}

pub fn canonical_key(sg: &SpinGraph) -> CanonicalKey {
    spin_key(&sg.graph, &sg.spin)
}
