use serde::Serialize;

use crate::bitset::{EdgeSet, VertexSet};
use crate::cycles::{pbar_decompose, require_cyclic};
use crate::error::{Error, Result};
use crate::graph::{Divisor, Graph};
use crate::spin::SpinStructure;

/// The contraction `γ: G → G/F`.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub source: Graph,
    pub contracted: EdgeSet,
    pub target: Graph,
    /// `γ^V`; target vertices are numbered by the smallest source vertex
    /// in their preimage.
    pub vertex_map: Vec<usize>,
    /// `γ^E` on `E ∖ F`; `None` on contracted edges.
    pub edge_map: Vec<Option<usize>>,
}

/// Wire form of a contraction witness.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ContractionWitness {
    #[serde(rename = "F")]
    pub f: String,
    pub vertex_map: Vec<usize>,
}

pub fn contract(g: &Graph, f: &EdgeSet) -> Result<Contraction> {
    if f.len() != g.num_edges() {
        return Err(Error::Input(format!("edge set of width {} on a graph with {} edges", f.len(), g.num_edges())));
    }
    let vertex_map = g.components_of(f);
    let count = vertex_map.iter().max().map_or(0, |m| m + 1);
    let mut weights = vec![0u32; count];
    let mut vertices = vec![0i64; count];
    let mut inner_edges = vec![0i64; count];
    for v in 0..g.num_vertices() {
        weights[vertex_map[v]] += g.weight(v);
        vertices[vertex_map[v]] += 1;
    }
    for e in f.iter() {
        inner_edges[vertex_map[g.edge_ends(e).0]] += 1;
    }
    for c in 0..count {
        // genus of the connected preimage: Σw + |F_c| − |V_c| + 1
        let b1 = inner_edges[c] - vertices[c] + 1;
        debug_assert!(b1 >= 0);
        weights[c] += b1 as u32;
    }
    let keep: Vec<usize> =
        (0..g.num_half_edges()).filter(|&h| g.edge_of(h).map_or(true, |e| !f.contains(e))).collect();
    let mut hnew = vec![usize::MAX; g.num_half_edges()];
    for (i, &h) in keep.iter().enumerate() {
        hnew[h] = i;
    }
    let endpoint = keep.iter().map(|&h| vertex_map[g.endpoint(h)]).collect();
    let involution = keep.iter().map(|&h| hnew[g.involution(h)]).collect();
    let legs = g.legs().iter().map(|&h| hnew[h]).collect();
    let target = Graph::from_half_edges(weights, endpoint, involution, legs)?;
    let edge_map = (0..g.num_edges())
        .map(|e| (!f.contains(e)).then(|| target.edge_of(hnew[g.edge_half_edges(e)[0]]).expect("kept edge")))
        .collect();
    Ok(Contraction { source: g.clone(), contracted: *f, target, vertex_map, edge_map })
}

impl Contraction {
    pub fn identity(g: &Graph) -> Self {
        contract(g, &g.no_edges()).expect("empty contraction")
    }

    pub fn witness(&self) -> ContractionWitness {
        ContractionWitness { f: self.contracted.to_hex(), vertex_map: self.vertex_map.clone() }
    }

    /// `γ^E_*`: the GF(2)-linear map on edge sets (contracted edges vanish).
    pub fn push_edges(&self, f: &EdgeSet) -> EdgeSet {
        let mut out = self.target.no_edges();
        for e in f.iter() {
            if let Some(t) = self.edge_map[e] {
                out.insert(t);
            }
        }
        out
    }

    /// `γ^V_*`: the GF(2)-linear map on vertex sets.
    pub fn push_vertices(&self, s: &VertexSet) -> VertexSet {
        let mut out = VertexSet::empty(self.target.num_vertices());
        for v in s.iter() {
            out.toggle(self.vertex_map[v]);
        }
        out
    }

    /// `γ_*` on divisors: values are summed over each preimage.
    pub fn push_divisor(&self, d: &Divisor) -> Result<Divisor> {
        if d.0.len() != self.source.num_vertices() {
            return Err(Error::Input("divisor length does not match the source graph".into()));
        }
        let mut out = vec![0i64; self.target.num_vertices()];
        for (v, &x) in d.0.iter().enumerate() {
            out[self.vertex_map[v]] += x;
        }
        Ok(Divisor(out))
    }

    /// `γ_*: C_G → C_{G/F}`, i.e. `P ↦ P ∖ F`.
    pub fn push_cycle(&self, p: &EdgeSet) -> Result<EdgeSet> {
        require_cyclic(&self.source, p)?;
        let out = self.push_edges(p);
        debug_assert!(crate::cycles::is_cyclic(&self.target, &out));
        Ok(out)
    }

    /// `γ_*(P, s)`: the cycle is pushed forward and each target component
    /// receives the GF(2) sum of the signs of the source components over it.
    pub fn push_spin(&self, s: &SpinStructure) -> Result<SpinStructure> {
        let p = self.push_cycle(s.cycle())?;
        let source_components = self.source.components_of(s.cycle());
        let target_components = self.target.components_of(&p);
        let count = target_components.iter().max().map_or(0, |m| m + 1);
        let mut representative = vec![usize::MAX; s.signs().len()];
        for v in 0..self.source.num_vertices() {
            let c = source_components[v];
            if representative[c] == usize::MAX {
                representative[c] = v;
            }
        }
        let mut signs = vec![false; count];
        for (c, &v) in representative.iter().enumerate() {
            if s.signs()[c] {
                let t = target_components[self.vertex_map[v]];
                signs[t] = !signs[t];
            }
        }
        let d = pbar_decompose(&self.target, &p)?;
        let pushed = SpinStructure::with_decomposition(&d, signs)
            .map_err(|e| Error::verification(format!("contraction of {}", self.contracted.to_hex()), e.to_string()))?;
        if pushed.parity() != s.parity() {
            return Err(Error::verification(
                format!("contraction of {}", self.contracted.to_hex()),
                "pushforward changed the parity",
            ));
        }
        Ok(pushed)
    }

    /// `γ̃ ∘ γ` as a single contraction of the source.
    pub fn then(&self, next: &Contraction) -> Result<Contraction> {
        if next.source != self.target {
            return Err(Error::Input("contractions are not composable".into()));
        }
        let mut f = self.contracted;
        for e in 0..self.source.num_edges() {
            if let Some(t) = self.edge_map[e] {
                if next.contracted.contains(t) {
                    f.insert(e);
                }
            }
        }
        contract(&self.source, &f)
    }

    /// Source edges mapping onto a subset `f` of the target edges.
    pub fn pull_edges(&self, f: &EdgeSet) -> EdgeSet {
        let mut out = self.source.no_edges();
        for e in 0..self.source.num_edges() {
            if self.edge_map[e].is_some_and(|t| f.contains(t)) {
                out.insert(e);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{boundary, cycle_basis, enumerate_cyclic};
    use crate::fixtures::*;
    use crate::spin::enumerate_spin;

    #[test]
    fn contract_examples() {
        let t = theta();
        let c = contract(&t, &t.edge_set([0]).unwrap()).unwrap();
        assert_eq!(c.target.num_vertices(), 1);
        assert_eq!(c.target.weights(), &[0]);
        assert_eq!(c.target.loops_at(0), 2);
        assert_eq!(c.edge_map, vec![None, Some(0), Some(1)]);

        let d = dumbbell();
        let c = contract(&d, &d.edge_set([0]).unwrap()).unwrap();
        assert_eq!(c.target.weights(), &[1, 0]);
        assert_eq!(c.target.b1(), d.b1() - 1);

        for g in [theta(), dumbbell(), loop_with_leg(), looped_double_edge()] {
            let c = contract(&g, &g.all_edges()).unwrap();
            assert_eq!(c.target.num_vertices(), 1);
            assert_eq!(c.target.weights(), &[g.genus()]);
            assert_eq!(c.target.num_legs(), g.num_legs());
        }
        let id = Contraction::identity(&t);
        assert_eq!(id.target, t);
    }

    #[test]
    fn push_cycle_examples() {
        let t = theta();
        let c = contract(&t, &t.edge_set([2]).unwrap()).unwrap();
        assert_eq!(c.push_cycle(&t.edge_set([0, 1]).unwrap()).unwrap().iter().collect::<Vec<_>>(), vec![0, 1]);
        let c = contract(&t, &t.edge_set([0, 1]).unwrap()).unwrap();
        assert!(c.push_cycle(&t.edge_set([0, 1]).unwrap()).unwrap().is_empty());
        assert!(c.push_cycle(&t.edge_set([0]).unwrap()).is_err());
    }

    #[test]
    fn push_spin_examples() {
        let d = dumbbell();
        let c = contract(&d, &d.edge_set([1]).unwrap()).unwrap();
        let s = SpinStructure::new(&d, d.edge_set([0, 2]).unwrap(), vec![true, false]).unwrap();
        let pushed = c.push_spin(&s).unwrap();
        assert_eq!(pushed.signs(), &[true]);
        assert_eq!(pushed.cycle().count(), 2);

        for s in enumerate_spin(&d, 24).unwrap() {
            let full = contract(&d, &d.all_edges()).unwrap().push_spin(&s).unwrap();
            assert!(full.cycle().is_empty());
            assert_eq!(full.parity(), s.parity());
            assert_eq!(Contraction::identity(&d).push_spin(&s).unwrap(), s);
        }
    }

    #[test]
    fn boundary_commutes_with_contraction() {
        for g in [theta(), dumbbell(), looped_double_edge(), quadruple_edge()] {
            for bits in 0..1u64 << g.num_edges() {
                let f = EdgeSet::from_bits(g.num_edges(), bits).unwrap();
                let c = contract(&g, &f).unwrap();
                for e in 0..g.num_edges() {
                    let basis = g.edge_set([e]).unwrap();
                    assert_eq!(
                        boundary(&c.target, &c.push_edges(&basis)),
                        c.push_vertices(&boundary(&g, &basis))
                    );
                }
            }
        }
    }

    #[test]
    fn push_cycle_is_onto() {
        for g in [theta(), dumbbell(), looped_double_edge()] {
            for bits in 0..1u64 << g.num_edges() {
                let f = EdgeSet::from_bits(g.num_edges(), bits).unwrap();
                let c = contract(&g, &f).unwrap();
                let mut image: Vec<EdgeSet> =
                    enumerate_cyclic(&g, 24).unwrap().iter().map(|p| c.push_cycle(p).unwrap()).collect();
                image.sort();
                image.dedup();
                assert_eq!(image, enumerate_cyclic(&c.target, 24).unwrap());
                assert_eq!(c.target.b1(), g.b1() - g.b1_of(&f));
            }
        }
        assert_eq!(cycle_basis(&theta()).len(), 2);
    }
}
