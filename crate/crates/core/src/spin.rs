//! Spin structures on graphs and the counting identities they satisfy.
//!
//! A spin structure on `G` is a cyclic edge set `P` together with a sign in
//! `{0, 1}` on every connected component of `P̄` (equivalently, on every
//! vertex of `G/P`), with sign 0 forced on genus-0 components.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::EdgeSet;
use crate::cycles::{enumerate_cyclic, pbar_decompose, require_cyclic, PbarDecomposition};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_sum(sum: usize) -> Self {
        if sum % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinStructure {
    cycle: EdgeSet,
    /// Indexed by component of `P̄`, components ordered by smallest vertex.
    signs: Vec<bool>,
    parity: Parity,
}

impl SpinStructure {
    /// Validates `P` and the sign vector against `g`.
    pub fn new(g: &Graph, cycle: EdgeSet, signs: Vec<bool>) -> Result<Self> {
        let decomposition = pbar_decompose(g, &cycle)?;
        Self::with_decomposition(&decomposition, signs)
    }

    pub fn with_decomposition(d: &PbarDecomposition, signs: Vec<bool>) -> Result<Self> {
        if signs.len() != d.len() {
            return Err(Error::Input(format!(
                "{} signs given for {} components of P̄",
                signs.len(),
                d.len()
            )));
        }
        if let Some(i) = (0..d.len()).find(|&i| signs[i] && d.components[i].genus == 0) {
            return Err(Error::Domain(format!("nonzero sign on genus-0 component {i}")));
        }
        let parity = Parity::from_sum(signs.iter().filter(|&&s| s).count());
        Ok(SpinStructure { cycle: d.cycle, signs, parity })
    }

    /// The trivial spin structure `(0, s₀)`.
    pub fn trivial(g: &Graph) -> Self {
        let components = g.components_of(&g.no_edges()).len();
        SpinStructure { cycle: g.no_edges(), signs: vec![false; components], parity: Parity::Even }
    }

    pub fn cycle(&self) -> &EdgeSet {
        &self.cycle
    }

    pub fn signs(&self) -> &[bool] {
        &self.signs
    }

    pub fn parity(&self) -> Parity {
        debug_assert_eq!(self.parity, Parity::from_sum(self.signs.iter().filter(|&&s| s).count()));
        self.parity
    }

    /// `h⁰ = Σ s(v)` over the integers.
    pub fn sign_sum(&self) -> usize {
        self.signs.iter().filter(|&&s| s).count()
    }

    pub fn to_json(&self) -> SpinJson {
        SpinJson {
            p: self.cycle.to_hex(),
            sign: self
                .signs
                .iter()
                .enumerate()
                .map(|(component, &s)| SignJson { component, s: s as u8 })
                .collect(),
            parity: Some(self.parity),
        }
    }

    pub fn from_json(g: &Graph, json: &SpinJson) -> Result<Self> {
        let cycle = EdgeSet::from_hex(g.num_edges(), &json.p)?;
        let d = pbar_decompose(g, &cycle)?;
        let mut signs = vec![false; d.len()];
        for entry in &json.sign {
            if entry.component >= d.len() || entry.s > 1 {
                return Err(Error::Input(format!("bad sign entry {entry:?}")));
            }
            signs[entry.component] = entry.s == 1;
        }
        let spin = Self::with_decomposition(&d, signs)?;
        if let Some(p) = json.parity {
            if p != spin.parity {
                return Err(Error::Input(format!("declared parity {p} but signs give {}", spin.parity)));
            }
        }
        Ok(spin)
    }
}

/// Wire form of a spin structure.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpinJson {
    #[serde(rename = "P")]
    pub p: String,
    pub sign: Vec<SignJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SignJson {
    pub component: usize,
    pub s: u8,
}

/// A graph together with a spin structure on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpinGraph {
    pub graph: Graph,
    pub spin: SpinStructure,
}

impl SpinGraph {
    pub fn new(graph: Graph, spin: SpinStructure) -> Result<Self> {
        if spin.cycle().len() != graph.num_edges() {
            return Err(Error::Input("spin structure is not defined over this graph".into()));
        }
        Ok(SpinGraph { graph, spin })
    }

    pub fn parity(&self) -> Parity {
        self.spin.parity()
    }

    /// `h⁰(X̂, L̂)` for a general curve of this type: the integer sum of the signs.
    pub fn h0_general(&self) -> usize {
        self.spin.sign_sum()
    }
}

/// All spin structures on one cyclic set, by sign mask over the
/// positive-genus components.
pub fn spin_structures_over(d: &PbarDecomposition) -> Vec<SpinStructure> {
    let free: Vec<usize> = (0..d.len()).filter(|&i| d.components[i].genus > 0).collect();
    (0..1u64 << free.len())
        .map(|mask| {
            let mut signs = vec![false; d.len()];
            for (j, &i) in free.iter().enumerate() {
                signs[i] = mask >> j & 1 == 1;
            }
            SpinStructure::with_decomposition(d, signs).expect("signs vanish on genus-0 components")
        })
        .collect()
}

/// `SP_G`, ordered by cyclic set and then by sign mask.
pub fn enumerate_spin(g: &Graph, cap: usize) -> Result<Vec<SpinStructure>> {
    let mut out = Vec::new();
    for p in enumerate_cyclic(g, cap)? {
        out.extend(spin_structures_over(&pbar_decompose(g, &p)?));
    }
    Ok(out)
}

pub fn split_by_parity(all: Vec<SpinStructure>) -> (Vec<SpinStructure>, Vec<SpinStructure>) {
    all.into_iter().partition(|s| s.parity() == Parity::Even)
}

/// Per-cycle data checked by [`spin_count_check`].
#[derive(Clone, Debug, Serialize)]
pub struct CycleCount {
    pub cycle: String,
    pub c_plus: usize,
    pub even: usize,
    pub odd: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpinCountReport {
    pub b1: usize,
    pub weightless: bool,
    pub total: usize,
    pub even: usize,
    pub odd: usize,
    /// `Σ_P 2^{c⁺(P̄)}`.
    pub closed_form: usize,
    /// `2^{b₁+1} − 1`.
    pub lower_bound: usize,
    pub bound_tight: bool,
    pub per_cycle: Vec<CycleCount>,
}

/// Recomputes `|SP_G|` by the closed form and by enumeration and checks the
/// lower bound, its equality case and the parity split per cyclic set.
pub fn spin_count_check(g: &Graph, cap: usize) -> Result<SpinCountReport> {
    let witness = |p: &EdgeSet| format!("graph with {} edges, P = {}", g.num_edges(), p.to_hex());
    let weightless = g.total_weight() == 0;
    let b1 = g.b1();
    let mut per_cycle = Vec::new();
    let mut closed_form = 0usize;
    let (mut even, mut odd) = (0, 0);
    let mut every_nonzero_has_one = true;
    for p in enumerate_cyclic(g, cap)? {
        let d = pbar_decompose(g, &p)?;
        closed_form += 1 << d.c_plus;
        let spins = spin_structures_over(&d);
        let e = spins.iter().filter(|s| s.parity() == Parity::Even).count();
        let o = spins.len() - e;
        if spins.len() != 1 << d.c_plus {
            return Err(Error::verification(witness(&p), format!("|SP_(G,P)| = {} ≠ 2^{}", spins.len(), d.c_plus)));
        }
        let expected = if p.is_empty() && weightless {
            (1, 0)
        } else {
            (1 << (d.c_plus - 1), 1 << (d.c_plus - 1))
        };
        if (e, o) != expected {
            return Err(Error::verification(witness(&p), format!("parity split ({e}, {o}), expected {expected:?}")));
        }
        if !p.is_empty() && d.c_plus != 1 {
            every_nonzero_has_one = false;
        }
        even += e;
        odd += o;
        per_cycle.push(CycleCount { cycle: p.to_hex(), c_plus: d.c_plus, even: e, odd: o });
    }
    let total = enumerate_spin(g, cap)?.len();
    let lower_bound = (1usize << (b1 + 1)) - 1;
    let w = |m: String| Error::verification(format!("graph with {} edges", g.num_edges()), m);
    if total != closed_form || total != even + odd {
        return Err(w(format!("enumeration gives {total}, closed form {closed_form}")));
    }
    if total < lower_bound {
        return Err(w(format!("{total} < 2^(b1+1) - 1 = {lower_bound}")));
    }
    let bound_tight = total == lower_bound;
    if bound_tight != (weightless && every_nonzero_has_one) {
        return Err(w("equality case of the lower bound does not match its characterization".into()));
    }
    Ok(SpinCountReport { b1, weightless, total, even, odd, closed_form, lower_bound, bound_tight, per_cycle })
}

/// A point of a tropical curve carrying divisor mass: a vertex or the
/// midpoint of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "index")]
pub enum TropicalPoint {
    Vertex(usize),
    Midpoint(usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaDivisors {
    /// `d^P_v = w(v) − 1 + deg_{P̄}(v)/2`, a divisor on `P̄`.
    pub graph_divisor: Vec<i64>,
    /// `D^P`: the support and values of the tropical theta divisor.
    pub tropical: Vec<(TropicalPoint, i64)>,
}

impl ThetaDivisors {
    pub fn tropical_degree(&self) -> i64 {
        self.tropical.iter().map(|(_, d)| d).sum()
    }
}

pub fn theta_divisors(g: &Graph, p: &EdgeSet) -> Result<ThetaDivisors> {
    require_cyclic(g, p)?;
    let graph_divisor: Vec<i64> = (0..g.num_vertices())
        .map(|v| {
            let deg = g.degree_in(v, p);
            debug_assert!(deg % 2 == 0);
            g.weight(v) as i64 - 1 + deg as i64 / 2
        })
        .collect();
    let mut tropical: Vec<(TropicalPoint, i64)> = graph_divisor
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != 0)
        .map(|(v, &d)| (TropicalPoint::Vertex(v), d))
        .collect();
    tropical.extend(p.complement().iter().map(|e| (TropicalPoint::Midpoint(e), 1)));
    Ok(ThetaDivisors { graph_divisor, tropical })
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumEntry {
    pub cycle: String,
    pub b1_cycle: usize,
    /// `2^{b₁(P)+2|w|}` points in `S_(X,P)`.
    pub points: u128,
    /// Length of the fiber at each of those points: `2^{b−b₁(P)}`.
    pub length_per_point: u128,
    pub total: u128,
    pub even_points: u128,
    pub odd_points: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumCount {
    pub genus: u32,
    pub per_cycle: Vec<StratumEntry>,
    pub grand_total: u128,
    /// Even and odd totals weighted by length.
    pub even_total: u128,
    pub odd_total: u128,
}

/// Number of (even, odd) theta characteristics on a smooth curve of genus `h`.
fn smooth_theta_split(h: u32) -> (u128, u128) {
    let a = 1u128 << h;
    if h == 0 {
        (1, 0)
    } else {
        ((a / 2) * (a + 1), (a / 2) * (a - 1))
    }
}

/// Counts of the fiber over a curve with dual graph `g`, stratified by
/// cyclic set. The parity split of each stratum is assembled from its
/// components: a component with cycles splits evenly, a smooth component
/// contributes the classical smooth split, and parities add.
pub fn stratum_counts(g: &Graph, cap: usize) -> Result<StratumCount> {
    if !g.is_stable() {
        return Err(Error::Domain("stratum counts need a stable graph".into()));
    }
    let genus = g.genus();
    let b = g.b1() as u32;
    let w = g.total_weight();
    let mut per_cycle = Vec::new();
    for p in enumerate_cyclic(g, cap)? {
        let b1p = g.b1_of(&p) as u32;
        let points = 1u128 << (b1p + 2 * w);
        let length_per_point = 1u128 << (b - b1p);
        let d = pbar_decompose(g, &p)?;
        let (mut even, mut odd) = (1u128, 0u128);
        for c in &d.components {
            let cb1 = c.graph.b1() as u32;
            let cw = c.graph.total_weight();
            let (ce, co) = if cb1 > 0 {
                let half = 1u128 << (cb1 + 2 * cw - 1);
                (half, half)
            } else {
                smooth_theta_split(cw)
            };
            (even, odd) = (even * ce + odd * co, even * co + odd * ce);
        }
        if even + odd != points {
            return Err(Error::verification(
                format!("P = {}", p.to_hex()),
                format!("component product gives {} points, expected {points}", even + odd),
            ));
        }
        let connected = {
            let touched: Vec<usize> = (0..g.num_vertices()).filter(|&v| g.degree_in(v, &p) > 0).collect();
            let labels = g.components_of(&p);
            touched.iter().all(|&v| labels[v] == labels[touched[0]])
        };
        if connected && b1p != 0 && (even != points / 2 || odd != points / 2) {
            return Err(Error::verification(format!("P = {}", p.to_hex()), "connected cycle does not split evenly"));
        }
        per_cycle.push(StratumEntry {
            cycle: p.to_hex(),
            b1_cycle: b1p as usize,
            points,
            length_per_point,
            total: points * length_per_point,
            even_points: even,
            odd_points: odd,
        });
    }
    let grand_total: u128 = per_cycle.iter().map(|e| e.total).sum();
    let even_total = per_cycle.iter().map(|e| e.even_points * e.length_per_point).sum();
    let odd_total = per_cycle.iter().map(|e| e.odd_points * e.length_per_point).sum();
    if grand_total != 1u128 << (2 * genus) {
        return Err(Error::verification("stratum counts", format!("total {grand_total} ≠ 2^{}", 2 * genus)));
    }
    Ok(StratumCount { genus, per_cycle, grand_total, even_total, odd_total })
}

#[derive(Clone, Debug, Serialize)]
pub struct GCollections {
    /// `(v, I_v)` for every vertex of `V⁺ = V ∖ V_{0,0}`.
    pub index_sets: Vec<(usize, Vec<u8>)>,
    pub count: u64,
}

/// Index sets `I_v` and the number of `G`-collections of a basic graph.
///
/// For `|V| ≥ 2` the count is checked against the odd theta count
/// `2^{b₁+2|w|−1}` of the full cyclic set.
pub fn g_collections(g: &Graph) -> Result<GCollections> {
    let class = g.classify();
    let Some(vertex_classes) = class.vertex_classes else {
        return Err(Error::Domain("G-collections are defined on basic graphs only".into()));
    };
    let index_sets: Vec<(usize, Vec<u8>)> = vertex_classes
        .iter()
        .enumerate()
        .filter(|(_, &(_, j))| j > 0)
        .map(|(v, &(i, _))| (v, if i == 0 { vec![1, 2] } else { vec![1, 2, 3, 4] }))
        .collect();
    let count = index_sets.iter().map(|(_, s)| s.len() as u64).product();
    if g.num_vertices() >= 2 {
        let expected = 1u64 << (g.b1() as u32 + 2 * g.total_weight() - 1);
        if count != expected {
            return Err(Error::verification(
                "basic graph",
                format!("{count} G-collections but 2^(b1+2|w|-1) = {expected}"),
            ));
        }
    }
    Ok(GCollections { index_sets, count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    fn counts(g: &Graph) -> (usize, usize, usize) {
        let all = enumerate_spin(g, 24).unwrap();
        let (e, o) = split_by_parity(all.clone());
        (all.len(), e.len(), o.len())
    }

    #[test]
    fn spin_enumeration_examples() {
        assert_eq!(counts(&theta()), (7, 4, 3));
        assert_eq!(counts(&dumbbell()), (9, 5, 4));
        assert_eq!(counts(&weighted_vertex(2, 0)), (2, 1, 1));
        let w = enumerate_spin(&weighted_vertex(3, 1), 24).unwrap();
        assert_eq!(w[0].signs(), &[false]);
        assert_eq!(w[1].signs(), &[true]);
    }

    #[test]
    fn genus_zero_has_only_the_trivial_structure() {
        let g = Graph::new(vec![0, 0], &[(0, 1)], &[0, 0, 1, 1]).unwrap();
        assert_eq!(counts(&g), (1, 1, 0));
    }

    #[test]
    fn count_check_examples() {
        let r = spin_count_check(&theta(), 24).unwrap();
        assert!(r.bound_tight);
        assert_eq!((r.total, r.lower_bound), (7, 7));
        let r = spin_count_check(&dumbbell(), 24).unwrap();
        assert!(!r.bound_tight);
        assert_eq!((r.total, r.lower_bound), (9, 7));
        let r = spin_count_check(&weighted_vertex(2, 0), 24).unwrap();
        assert_eq!((r.total, r.lower_bound), (2, 1));
    }

    #[test]
    fn rejects_sign_on_genus_zero_component() {
        let t = theta();
        assert!(matches!(SpinStructure::new(&t, t.no_edges(), vec![true, false]), Err(Error::Domain(_))));
        assert!(SpinStructure::new(&t, t.no_edges(), vec![false]).is_err());
    }

    #[test]
    fn theta_divisor_examples() {
        let t = theta();
        let d = theta_divisors(&t, &t.edge_set([0, 1]).unwrap()).unwrap();
        assert_eq!(d.graph_divisor, vec![0, 0]);
        assert_eq!(d.tropical, vec![(TropicalPoint::Midpoint(2), 1)]);
        assert_eq!(d.tropical_degree(), 1);

        let w = weighted_vertex(4, 0);
        assert_eq!(theta_divisors(&w, &w.no_edges()).unwrap().graph_divisor, vec![3]);

        let db = dumbbell();
        let d = theta_divisors(&db, &db.edge_set([0, 2]).unwrap()).unwrap();
        assert_eq!(d.graph_divisor, vec![0, 0]);
        assert_eq!(d.tropical, vec![(TropicalPoint::Midpoint(1), 1)]);
    }

    #[test]
    fn stratum_count_examples() {
        let s = stratum_counts(&theta(), 24).unwrap();
        assert_eq!(s.per_cycle.iter().map(|e| e.total).collect::<Vec<_>>(), vec![4, 4, 4, 4]);
        assert_eq!(s.grand_total, 16);
        assert_eq!((s.even_total, s.odd_total), (10, 6));

        let s = stratum_counts(&weighted_vertex(3, 0), 24).unwrap();
        assert_eq!(s.per_cycle.len(), 1);
        assert_eq!((s.per_cycle[0].points, s.per_cycle[0].length_per_point), (64, 1));
        assert_eq!((s.even_total, s.odd_total), (36, 28));

        assert_eq!(stratum_counts(&dumbbell(), 24).unwrap().grand_total, 16);
    }

    #[test]
    fn h0_examples() {
        let t = theta();
        let sg = SpinGraph::new(t.clone(), SpinStructure::new(&t, t.edge_set([0, 1]).unwrap(), vec![true]).unwrap()).unwrap();
        assert_eq!(sg.h0_general(), 1);
        let db = dumbbell();
        let s = SpinStructure::new(&db, db.edge_set([0, 2]).unwrap(), vec![true, true]).unwrap();
        assert_eq!(s.sign_sum(), 2);
        assert_eq!(s.parity(), Parity::Even);
        assert_eq!(SpinStructure::trivial(&db).sign_sum(), 0);
    }

    #[test]
    fn g_collection_examples() {
        let r = g_collections(&looped_double_edge()).unwrap();
        assert_eq!(r.count, 4);
        assert_eq!(r.index_sets, vec![(0, vec![1, 2]), (1, vec![1, 2])]);

        let r = g_collections(&rose(2, 0)).unwrap();
        assert_eq!(r.index_sets, vec![(0, vec![1, 2])]);

        let r = g_collections(&rose(1, 1)).unwrap();
        assert_eq!(r.count, 4);

        assert!(matches!(g_collections(&theta()), Err(Error::Domain(_))));
    }

    #[test]
    fn spin_json_round_trip() {
        let db = dumbbell();
        let s = SpinStructure::new(&db, db.edge_set([0, 2]).unwrap(), vec![true, false]).unwrap();
        let json = serde_json::to_string(&s.to_json()).unwrap();
        assert_eq!(json, r#"{"P":"5","sign":[{"component":0,"s":1},{"component":1,"s":0}],"parity":"odd"}"#);
        let back: SpinJson = serde_json::from_str(&json).unwrap();
        assert_eq!(SpinStructure::from_json(&db, &back).unwrap(), s);
    }
}
