use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::GraphJson;
use crate::morphisms::{contract, graph_key, order_test, spin_key, Contraction, ContractionWitness};
use crate::spin::{Parity, SignJson, SpinGraph, SpinJson, SpinStructure};
use crate::EdgeSet;

use super::curve::{pi_trop, SpinTropicalCurve, TropicalCurve};
use super::length::{lengths_from_json, lengths_to_json, Length, LengthJson};

/// A one-parameter family of spin curves, recorded by its special fiber
/// and the valuation of the smoothing parameter at each node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyDescriptor {
    pub special: SpinGraph,
    pub val: Vec<Length>,
}

impl FamilyDescriptor {
    pub fn new(special: SpinGraph, val: Vec<Length>) -> Result<Self> {
        if val.len() != special.graph.num_edges() {
            return Err(Error::Input(format!("{} valuations for {} edges", val.len(), special.graph.num_edges())));
        }
        if let Some(e) = val.iter().position(|v| !v.is_positive()) {
            return Err(Error::Input(format!("valuation of edge {e} must be positive")));
        }
        Ok(FamilyDescriptor { special, val })
    }

    /// `S₀`: nodes that get smoothed in the generic fiber.
    pub fn smoothed(&self) -> EdgeSet {
        let n = self.val.len();
        EdgeSet::from_indices(n, (0..n).filter(|&e| self.val[e].is_finite())).expect("edges in range")
    }

    /// `R = E ∖ P`.
    pub fn blown_up(&self) -> EdgeSet {
        self.special.spin.cycle().complement()
    }

    pub fn to_json(&self) -> FamilyJson {
        let spin = self.special.spin.to_json();
        FamilyJson {
            graph: GraphJson::from_graph(&self.special.graph),
            p: spin.p,
            sign: spin.sign,
            parity: spin.parity,
            val: lengths_to_json(&self.val),
        }
    }

    pub fn from_json(json: &FamilyJson) -> Result<Self> {
        let graph = json.graph.to_graph()?;
        let spin = SpinStructure::from_json(
            &graph,
            &SpinJson { p: json.p.clone(), sign: json.sign.clone(), parity: json.parity },
        )?;
        let val = lengths_from_json(&json.val, graph.num_edges())?;
        FamilyDescriptor::new(SpinGraph::new(graph, spin)?, val)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyJson {
    pub graph: GraphJson,
    #[serde(rename = "P")]
    pub p: String,
    pub sign: Vec<SignJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Parity>,
    pub val: Vec<LengthJson>,
}

/// `Trop`: the extended spin tropical curve with `ℓ = val`.
pub fn trop_family(fam: &FamilyDescriptor) -> Result<SpinTropicalCurve> {
    let psi = SpinTropicalCurve::new(
        TropicalCurve::new(fam.special.graph.clone(), fam.val.clone())?,
        fam.special.spin.clone(),
    )?;
    // lands in the closed cell of the special class
    if spin_key(&psi.curve.graph, &psi.spin) != spin_key(&fam.special.graph, &fam.special.spin) {
        return Err(Error::verification("Trop", "curve left the cell of the special fiber"));
    }
    Ok(psi)
}

/// Valuations on the stable model: each blown-up node has `t = s²`, so
/// its valuation doubles.
pub fn family_stable_model(fam: &FamilyDescriptor) -> Result<TropicalCurve> {
    let r = fam.blown_up();
    let val = fam
        .val
        .iter()
        .enumerate()
        .map(|(e, v)| if r.contains(e) { v.double() } else { Ok(*v) })
        .collect::<Result<_>>()?;
    TropicalCurve::new(fam.special.graph.clone(), val)
}

/// The stable model computed through the blow-up `Ĝ_R`: each of the two
/// edges over a blown-up node carries the node's valuation, and
/// stabilizing (forgetting the exceptional vertices) adds them up.
pub fn stable_model_by_blowup(fam: &FamilyDescriptor) -> Result<TropicalCurve> {
    let g = &fam.special.graph;
    let blow = g.blow_up(&fam.blown_up())?;
    let mut hat = vec![None; blow.graph.num_edges()];
    for (e, over) in blow.edges_over.iter().enumerate() {
        for &f in over {
            hat[f] = Some(fam.val[e]);
        }
    }
    let hat: Vec<Length> = hat.into_iter().map(|x| x.expect("every edge lies over an edge")).collect();
    // contracting one edge of each pair recovers G
    let mut one_side = blow.graph.no_edges();
    for over in &blow.edges_over {
        if over.len() == 2 {
            one_side.insert(over[1]);
        }
    }
    if graph_key(&contract(&blow.graph, &one_side)?.target) != graph_key(g) {
        return Err(Error::verification("blow-up", "contracting the exceptional edges does not give G back"));
    }
    let val = blow
        .edges_over
        .iter()
        .map(|over| over.iter().try_fold(Length::integer(0), |acc, &f| acc.add(&hat[f])))
        .collect::<Result<_>>()?;
    TropicalCurve::new(g.clone(), val)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramReport {
    pub trop: Vec<LengthJson>,
    pub stable_model: Vec<LengthJson>,
    pub pi_trop_of_trop: Vec<LengthJson>,
    pub commutes: bool,
}

/// `π^trop ∘ Trop = Trop ∘ (stable model)`, with the stable model computed
/// both by the doubling rule and through the blow-up.
pub fn diagram_check(fam: &FamilyDescriptor) -> Result<DiagramReport> {
    let psi = trop_family(fam)?;
    let left = pi_trop(&psi)?;
    let right = family_stable_model(fam)?;
    let blown = stable_model_by_blowup(fam)?;
    Ok(DiagramReport {
        trop: lengths_to_json(&psi.curve.lengths),
        stable_model: lengths_to_json(&right.lengths),
        pi_trop_of_trop: lengths_to_json(&left.lengths),
        commutes: left == right && right == blown,
    })
}

#[derive(Clone, Debug)]
pub struct GenericFiber {
    pub spin_graph: SpinGraph,
    /// The contraction of `S₀`.
    pub contraction: Contraction,
    /// The contraction found by the order search, witnessing `[G,P,s] ≥ [H,Q,s']`.
    pub order_witness: Contraction,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenericFiberJson {
    pub graph: GraphJson,
    #[serde(flatten)]
    pub spin: SpinJson,
    pub key: String,
    pub contraction: ContractionWitness,
    pub order_witness: ContractionWitness,
}

impl GenericFiber {
    pub fn to_json(&self) -> GenericFiberJson {
        GenericFiberJson {
            graph: GraphJson::from_graph(&self.spin_graph.graph),
            spin: self.spin_graph.spin.to_json(),
            key: spin_key(&self.spin_graph.graph, &self.spin_graph.spin).to_hex(),
            contraction: self.contraction.witness(),
            order_witness: self.order_witness.witness(),
        }
    }
}

/// The dual spin graph of the generic fiber: contract the smoothed nodes
/// and push the spin structure forward.
pub fn family_generic_fiber(fam: &FamilyDescriptor) -> Result<GenericFiber> {
    let s0 = fam.smoothed();
    let gamma = contract(&fam.special.graph, &s0)?;
    let spin = gamma.push_spin(&fam.special.spin)?;
    // the surviving non-P edges are exactly T = R ∖ S₀
    let t = fam.blown_up().difference(&s0);
    if gamma.push_edges(&t) != spin.cycle().complement() {
        return Err(Error::verification("generic fiber", "E(H) ∖ Q differs from the image of R ∖ S₀"));
    }
    let generic = SpinGraph::new(gamma.target.clone(), spin)?;
    let order_witness = order_test(&fam.special, &generic)?.ok_or_else(|| {
        Error::verification(
            format!("class {}", spin_key(&fam.special.graph, &fam.special.spin)),
            "no contraction onto the generic fiber's class",
        )
    })?;
    Ok(GenericFiber { spin_graph: generic, contraction: gamma, order_witness })
}

/// A random descriptor over `special`: each valuation is `∞` with
/// probability 1/4, otherwise `p/q` with `1 ≤ p ≤ 12`, `1 ≤ q ≤ 4`.
pub fn random_family<R: Rng + ?Sized>(rng: &mut R, special: SpinGraph) -> Result<FamilyDescriptor> {
    let val = (0..special.graph.num_edges())
        .map(|_| {
            if rng.gen_ratio(1, 4) {
                Ok(Length::Infinite)
            } else {
                Length::new(rng.gen_range(1..=12), rng.gen_range(1..=4))
            }
        })
        .collect::<Result<_>>()?;
    FamilyDescriptor::new(special, val)
}
