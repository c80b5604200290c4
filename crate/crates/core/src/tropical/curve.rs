use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::GraphJson;
use crate::morphisms::{automorphisms, AutGroup, AutRestriction};
use crate::spin::{enumerate_spin, SignJson, SpinGraph, SpinJson, SpinStructure};
use crate::EdgeSet;

use super::length::{lengths_from_json, lengths_to_json, Length, LengthJson};

/// A graph with a length on every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCurve {
    pub graph: Graph,
    pub lengths: Vec<Length>,
}

impl TropicalCurve {
    pub fn new(graph: Graph, lengths: Vec<Length>) -> Result<Self> {
        if lengths.len() != graph.num_edges() {
            return Err(Error::Input(format!("{} lengths for {} edges", lengths.len(), graph.num_edges())));
        }
        Ok(TropicalCurve { graph, lengths })
    }

    pub fn is_finite(&self) -> bool {
        self.lengths.iter().all(Length::is_finite)
    }

    pub fn infinite_edges(&self) -> EdgeSet {
        EdgeSet::from_indices(self.graph.num_edges(), (0..self.lengths.len()).filter(|&e| !self.lengths[e].is_finite()))
            .expect("edge indices in range")
    }

    /// `Aut(Γ)`: automorphisms of the graph preserving every length.
    pub fn automorphisms(&self) -> Result<AutGroup> {
        let full = automorphisms(&self.graph, AutRestriction::None)?;
        Ok(full.filter(&self.graph, |a| {
            let perm = a.edge_permutation(&self.graph);
            (0..perm.len()).all(|e| self.lengths[perm[e]] == self.lengths[e])
        }))
    }
}

/// `Ψ = (Γ, P, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinTropicalCurve {
    pub curve: TropicalCurve,
    pub spin: SpinStructure,
}

impl SpinTropicalCurve {
    pub fn new(curve: TropicalCurve, spin: SpinStructure) -> Result<Self> {
        if spin.cycle().len() != curve.graph.num_edges() {
            return Err(Error::Input("spin structure is not defined over the curve's graph".into()));
        }
        Ok(SpinTropicalCurve { curve, spin })
    }

    pub fn spin_graph(&self) -> SpinGraph {
        SpinGraph { graph: self.curve.graph.clone(), spin: self.spin.clone() }
    }

    pub fn to_json(&self) -> SpinTropicalCurveJson {
        let spin = self.spin.to_json();
        SpinTropicalCurveJson {
            graph: GraphJson::from_graph(&self.curve.graph),
            p: spin.p,
            sign: spin.sign,
            parity: spin.parity,
            lengths: lengths_to_json(&self.curve.lengths),
        }
    }

    pub fn from_json(json: &SpinTropicalCurveJson) -> Result<Self> {
        let graph = json.graph.to_graph()?;
        let spin = SpinStructure::from_json(
            &graph,
            &SpinJson { p: json.p.clone(), sign: json.sign.clone(), parity: json.parity },
        )?;
        let lengths = lengths_from_json(&json.lengths, graph.num_edges())?;
        SpinTropicalCurve::new(TropicalCurve::new(graph, lengths)?, spin)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TropicalCurveJson {
    pub graph: GraphJson,
    pub lengths: Vec<LengthJson>,
}

impl TropicalCurveJson {
    pub fn from_curve(c: &TropicalCurve) -> Self {
        TropicalCurveJson { graph: GraphJson::from_graph(&c.graph), lengths: lengths_to_json(&c.lengths) }
    }

    pub fn to_curve(&self) -> Result<TropicalCurve> {
        let graph = self.graph.to_graph()?;
        let lengths = lengths_from_json(&self.lengths, graph.num_edges())?;
        TropicalCurve::new(graph, lengths)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpinTropicalCurveJson {
    pub graph: GraphJson,
    #[serde(rename = "P")]
    pub p: String,
    pub sign: Vec<SignJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<crate::spin::Parity>,
    pub lengths: Vec<LengthJson>,
}

/// `π^trop`: lengths doubled on `E ∖ P`.
pub fn pi_trop(psi: &SpinTropicalCurve) -> Result<TropicalCurve> {
    let lengths = psi
        .curve
        .lengths
        .iter()
        .enumerate()
        .map(|(e, l)| if psi.spin.cycle().contains(e) { Ok(*l) } else { l.double() })
        .collect::<Result<_>>()?;
    TropicalCurve::new(psi.curve.graph.clone(), lengths)
}

/// `Γ_P`: lengths halved on `E ∖ P`.
fn halved(gamma: &TropicalCurve, s: &SpinStructure) -> Result<SpinTropicalCurve> {
    let lengths = gamma
        .lengths
        .iter()
        .enumerate()
        .map(|(e, l)| if s.cycle().contains(e) { Ok(*l) } else { l.half() })
        .collect::<Result<_>>()?;
    SpinTropicalCurve::new(TropicalCurve::new(gamma.graph.clone(), lengths)?, s.clone())
}

/// Representatives of `(π^trop)^{-1}([Γ])`: one per `Aut(Γ)`-orbit of `SP_G`,
/// each the smallest spin structure in its orbit.
pub fn pi_trop_fiber(gamma: &TropicalCurve, b1_cap: usize) -> Result<Vec<SpinTropicalCurve>> {
    if !gamma.graph.is_stable() {
        return Err(Error::Domain("fibers are computed over stable curves".into()));
    }
    let spins = enumerate_spin(&gamma.graph, b1_cap)?;
    let group = gamma.automorphisms()?;
    let orbits = group.spin_orbits(&gamma.graph, &spins)?;
    let mut out = Vec::with_capacity(orbits.len());
    for orbit in orbits {
        let rep = halved(gamma, &spins[orbit[0]])?;
        if pi_trop(&rep)? != *gamma {
            return Err(Error::verification("fiber representative", "does not map back to Γ under π^trop"));
        }
        out.push(rep);
    }
    Ok(out)
}

/// Number of `Aut(Γ)`-orbits on `SP_G` by Burnside's lemma, as an
/// independent count of the fiber.
pub fn fiber_size_by_burnside(gamma: &TropicalCurve, b1_cap: usize) -> Result<usize> {
    let spins = enumerate_spin(&gamma.graph, b1_cap)?;
    let group = gamma.automorphisms()?;
    let mut fixed = 0usize;
    for a in group.elements() {
        for s in &spins {
            if a.act_on_spin(&gamma.graph, s)? == *s {
                fixed += 1;
            }
        }
    }
    if fixed % group.order() != 0 {
        return Err(Error::verification("Burnside count", "fixed-point total not divisible by the group order"));
    }
    Ok(fixed / group.order())
}

/// Distinct lengths on the curve, as a symmetry diagnostic.
pub fn distinct_lengths(gamma: &TropicalCurve) -> usize {
    gamma.lengths.iter().collect::<BTreeSet<_>>().len()
}
