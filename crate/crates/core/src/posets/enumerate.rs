use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cycles::DEFAULT_B1_CAP;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::morphisms::{contract, graph_key, CanonicalKey};
use crate::registry::{Named, Registry};
use crate::EdgeSet;

/// Size caps for enumeration.
#[derive(Clone, Debug, Serialize)]
pub struct Budget {
    /// Largest allowed `3g − 3 + n` (the top rank).
    pub max_edges: usize,
    pub b1_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_edges: 9, b1_cap: DEFAULT_B1_CAP }
    }
}

impl Budget {
    pub fn check(&self, g: u32, n: usize) -> Result<()> {
        let top = (3 * g as i64 - 3 + n as i64).max(0) as usize;
        if top > self.max_edges {
            return Err(Error::Budget(format!(
                "(g, n) = ({g}, {n}) has top rank {top}, above the edge budget {}",
                self.max_edges
            )));
        }
        Ok(())
    }
}

/// `S_{g,n}` is nonempty exactly when `2g − 2 + n > 0`.
pub fn is_nonempty(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

/// An isomorphism class of stable graphs.
#[derive(Clone, Debug)]
pub struct GraphClass {
    pub key: CanonicalKey,
    pub graph: Graph,
}

impl GraphClass {
    pub fn new(graph: Graph) -> Self {
        GraphClass { key: graph_key(&graph), graph }
    }

    pub fn rank(&self) -> usize {
        self.graph.num_edges()
    }
}

fn sorted(classes: impl IntoIterator<Item = GraphClass>) -> Vec<GraphClass> {
    let mut by_key: BTreeMap<(usize, CanonicalKey), Graph> = BTreeMap::new();
    for c in classes {
        by_key.entry((c.graph.num_edges(), c.key)).or_insert(c.graph);
    }
    by_key.into_iter().map(|((_, key), graph)| GraphClass { key, graph }).collect()
}

/// A strategy producing all stable graphs of genus `g` with `n` legs, one
/// per isomorphism class, sorted by rank and then key.
pub trait GraphEnumerator: Named + Send + Sync {
    fn enumerate(&self, g: u32, n: usize, budget: &Budget) -> Result<Vec<GraphClass>>;
}

/// Fills a symmetric multiplicity matrix row by row. `row_done(u, deg)`
/// accepts or rejects vertex `u` once its degree is final; `feasible`
/// prunes partial states.
struct Fill<'a> {
    n: usize,
    pairs: Vec<(usize, usize)>,
    degree_cap: &'a dyn Fn(usize) -> usize,
    row_done: &'a dyn Fn(usize, usize) -> bool,
    feasible: &'a dyn Fn(usize, &[usize], usize) -> bool,
    edges: Option<usize>,
}

impl Fill<'_> {
    fn run(&self, mut emit: impl FnMut(&[(usize, usize)])) {
        let mut deg = vec![0usize; self.n];
        let mut edges = Vec::new();
        self.go(0, &mut deg, &mut edges, &mut emit);
    }

    fn go(&self, i: usize, deg: &mut Vec<usize>, edges: &mut Vec<(usize, usize)>, emit: &mut impl FnMut(&[(usize, usize)])) {
        if i > 0 {
            let (u, v) = self.pairs[i - 1];
            let row_ends = i == self.pairs.len() || self.pairs[i].0 != u;
            if row_ends && v == self.n - 1 && !(self.row_done)(u, deg[u]) {
                return;
            }
            if row_ends && !(self.feasible)(u + 1, deg, edges.len()) {
                return;
            }
        }
        if i == self.pairs.len() {
            if self.edges.map_or(true, |e| e == edges.len()) {
                emit(edges);
            }
            return;
        }
        let (u, v) = self.pairs[i];
        let room_u = (self.degree_cap)(u).saturating_sub(deg[u]);
        let room_v = (self.degree_cap)(v).saturating_sub(deg[v]);
        let room_e = self.edges.map_or(usize::MAX, |e| e - edges.len());
        let max = if u == v { room_u / 2 } else { room_u.min(room_v) }.min(room_e);
        for c in 0..=max {
            for _ in 0..c {
                edges.push((u, v));
            }
            if u == v {
                deg[u] += 2 * c;
            } else {
                deg[u] += c;
                deg[v] += c;
            }
            self.go(i + 1, deg, edges, emit);
            if u == v {
                deg[u] -= 2 * c;
            } else {
                deg[u] -= c;
                deg[v] -= c;
            }
            edges.truncate(edges.len() - c);
        }
    }
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u..n).map(move |v| (u, v))).collect()
}

/// Restricted-growth assignments of `n` ordered legs to at most `v`
/// interchangeable vertices, at most `cap` legs per vertex.
fn restricted_growth(n: usize, v: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(n);
    fn go(n: usize, v: usize, cap: usize, seq: &mut Vec<usize>, count: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if seq.len() == n {
            out.push(seq.clone());
            return;
        }
        let used = seq.iter().max().map_or(0, |m| m + 1);
        for x in 0..(used + 1).min(v) {
            if count[x] < cap {
                count[x] += 1;
                seq.push(x);
                go(n, v, cap, seq, count, out);
                seq.pop();
                count[x] -= 1;
            }
        }
    }
    go(n, v, cap, &mut seq, &mut vec![0; v], &mut out);
    out
}

/// Weightless graphs with `deg + ℓ = 3` at every vertex: the maximal elements.
pub fn three_regular_graphs(g: u32, n: usize) -> Result<Vec<GraphClass>> {
    if !is_nonempty(g, n) {
        return Ok(Vec::new());
    }
    let v = 2 * g as usize + n - 2;
    let pairs = upper_pairs(v);
    let mut found: Vec<GraphClass> = restricted_growth(n, v, 3)
        .into_par_iter()
        .flat_map_iter(|legs| {
            let mut legs_at = vec![0usize; v];
            for &x in &legs {
                legs_at[x] += 1;
            }
            let cap = |u: usize| 3 - legs_at[u];
            let done = |u: usize, d: usize| d == 3 - legs_at[u];
            let feasible = |_: usize, _: &[usize], _: usize| true;
            let fill = Fill { n: v, pairs: pairs.clone(), degree_cap: &cap, row_done: &done, feasible: &feasible, edges: None };
            let mut local = Vec::new();
            fill.run(|edges| {
                if let Ok(graph) = Graph::new(vec![0; v], edges, &legs) {
                    if graph.is_connected() {
                        local.push(GraphClass::new(graph));
                    }
                }
            });
            local
        })
        .collect();
    found = sorted(found);
    Ok(found)
}

/// Downward closure of the 3-regular classes under single-edge contraction.
pub struct ClosureEnumerator;

impl Named for ClosureEnumerator {
    fn name(&self) -> &'static str {
        "closure"
    }
    fn description(&self) -> &'static str {
        "3-regular seeds closed under single-edge contractions"
    }
}

impl GraphEnumerator for ClosureEnumerator {
    fn enumerate(&self, g: u32, n: usize, budget: &Budget) -> Result<Vec<GraphClass>> {
        budget.check(g, n)?;
        let mut level = three_regular_graphs(g, n)?;
        let mut all = level.clone();
        while level.first().is_some_and(|c| c.rank() > 0) {
            let next: Vec<GraphClass> = level
                .par_iter()
                .flat_map_iter(|c| {
                    (0..c.graph.num_edges()).map(move |e| {
                        let f = EdgeSet::from_indices(c.graph.num_edges(), [e]).expect("edge index");
                        GraphClass::new(contract(&c.graph, &f).expect("valid edge set").target)
                    })
                })
                .collect();
            level = sorted(next);
            all.extend(level.iter().cloned());
        }
        Ok(sorted(all))
    }
}

/// Independent generator: every vertex count, weight vector, leg placement
/// and multigraph with the right number of edges, filtered by stability.
pub struct DirectEnumerator;

impl Named for DirectEnumerator {
    fn name(&self) -> &'static str {
        "direct"
    }
    fn description(&self) -> &'static str {
        "brute-force generation over weights, legs and edge multiplicities"
    }
}

fn nonincreasing_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(left: u32, parts: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == parts {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in (0..=left.min(max)).rev() {
            cur.push(x);
            go(left - x, parts, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, total, &mut Vec::new(), &mut out);
    out
}

impl GraphEnumerator for DirectEnumerator {
    fn enumerate(&self, g: u32, n: usize, budget: &Budget) -> Result<Vec<GraphClass>> {
        budget.check(g, n)?;
        if !is_nonempty(g, n) {
            return Ok(Vec::new());
        }
        let max_v = 2 * g as usize + n - 2;
        let mut jobs = Vec::new();
        for v in 1..=max_v {
            for w in 0..=g {
                let e = (g - w) as usize + v - 1;
                for weights in nonincreasing_compositions(w, v) {
                    for code in 0..(v as u64).pow(n as u32) {
                        let legs: Vec<usize> =
                            (0..n).map(|i| (code / (v as u64).pow(i as u32) % v as u64) as usize).collect();
                        jobs.push((weights.clone(), legs, e));
                    }
                }
            }
        }
        let found: Vec<GraphClass> = jobs
            .into_par_iter()
            .flat_map_iter(|(weights, legs, e)| {
                let v = weights.len();
                let mut legs_at = vec![0usize; v];
                for &x in &legs {
                    legs_at[x] += 1;
                }
                let need: Vec<usize> = (0..v)
                    .map(|u| {
                        let stab = (3 - 2 * weights[u] as i64 - legs_at[u] as i64).max(0) as usize;
                        stab.max(usize::from(v > 1))
                    })
                    .collect();
                let cap = |_: usize| usize::MAX;
                let done = |u: usize, d: usize| d >= need[u];
                let feasible = |from: usize, deg: &[usize], used: usize| {
                    let missing: usize = (from..v).map(|u| need[u].saturating_sub(deg[u])).sum();
                    missing <= 2 * (e - used)
                };
                let fill = Fill { n: v, pairs: upper_pairs(v), degree_cap: &cap, row_done: &done, feasible: &feasible, edges: Some(e) };
                let mut local = Vec::new();
                fill.run(|edges| {
                    if let Ok(graph) = Graph::new(weights.clone(), edges, &legs) {
                        if graph.is_stable() && graph.genus() == g {
                            local.push(GraphClass::new(graph));
                        }
                    }
                });
                local
            })
            .collect();
        Ok(sorted(found))
    }
}

pub fn enumerator_registry() -> Registry<dyn GraphEnumerator> {
    let mut r: Registry<dyn GraphEnumerator> = Registry::new("enumerator");
    r.register(Box::new(ClosureEnumerator)).register(Box::new(DirectEnumerator));
    r
}

/// `S_{g,n}` via the default strategy.
pub fn enumerate_stable_graphs(g: u32, n: usize, budget: &Budget) -> Result<Vec<GraphClass>> {
    ClosureEnumerator.enumerate(g, n, budget)
}
