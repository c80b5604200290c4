use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::bitset::EdgeSet;
use crate::cycles::boundary;
use crate::error::{Error, Result};
use crate::morphisms::{contract, spin_key, Contraction};
use crate::posets::PosetKind;
use crate::registry::Named;
use crate::spin::{enumerate_spin, SpinGraph};
use crate::tropical::{diagram_check, family_generic_fiber, random_family, trop_family};

use super::{CheckResult, Context, Suite, DEFAULT_CHAINS, DEFAULT_FAMILIES};

/// Pushforwards along contractions and tropicalization of families.
pub struct FunctorialitySuite;

impl Named for FunctorialitySuite {
    fn name(&self) -> &'static str {
        "functoriality"
    }
    fn description(&self) -> &'static str {
        "composition of pushforwards, surjectivity, and the tropicalization diagram on random families"
    }
}

fn random_subset(rng: &mut ChaCha8Rng, len: usize) -> EdgeSet {
    let mut f = EdgeSet::empty(len);
    for e in 0..len {
        if rng.gen_bool(0.5) {
            f.insert(e);
        }
    }
    f
}

/// One chain `G → G/F → (G/F)/F̃` with every composition identity checked.
fn check_chain(sg: &SpinGraph, first: &Contraction, second: &Contraction) -> Result<()> {
    let witness = || format!("class {} along {} then {}", spin_key(&sg.graph, &sg.spin), first.contracted.to_hex(), second.contracted.to_hex());
    let fail = |m: &str| Err(Error::verification(witness(), m.to_string()));
    let composite = first.then(second)?;
    if composite.target != second.target {
        return fail("composite contraction has a different target");
    }
    let maps_agree = (0..sg.graph.num_vertices()).all(|v| composite.vertex_map[v] == second.vertex_map[first.vertex_map[v]])
        && (0..sg.graph.num_edges()).all(|e| composite.edge_map[e] == first.edge_map[e].and_then(|t| second.edge_map[t]));
    if !maps_agree {
        return fail("vertex or edge maps do not compose");
    }
    let p = sg.spin.cycle();
    if composite.push_cycle(p)? != second.push_cycle(&first.push_cycle(p)?)? {
        return fail("(γ̃γ)_* ≠ γ̃_*γ_* on cycles");
    }
    let direct = composite.push_spin(&sg.spin)?;
    let stepwise = second.push_spin(&first.push_spin(&sg.spin)?)?;
    if direct != stepwise {
        return fail("(γ̃γ)_* ≠ γ̃_*γ_* on spin structures");
    }
    if direct.parity() != sg.spin.parity() {
        return fail("parity changed");
    }
    // boundary commutes with pushforward
    for f in [p.complement(), first.contracted] {
        if boundary(&first.target, &first.push_edges(&f)) != first.push_vertices(&boundary(&sg.graph, &f)) {
            return fail("boundary does not commute with the pushforward");
        }
    }
    Ok(())
}

impl Suite for FunctorialitySuite {
    fn checks(&self, ctx: &Context) -> Result<Vec<CheckResult>> {
        let mut out = Vec::new();
        let spin = ctx.poset(PosetKind::Spin)?;
        let seed = ctx.config.seed;

        out.push(CheckResult::run("contraction_chains", || {
            let count = ctx.fuzz_or(DEFAULT_CHAINS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let jobs: Vec<(usize, u64)> = (0..count).map(|_| (rng.gen_range(0..spin.nodes.len()), rng.gen())).collect();
            jobs.par_iter()
                .map(|&(i, chain_seed)| {
                    let mut rng = ChaCha8Rng::seed_from_u64(chain_seed);
                    let sg = spin.nodes[i].spin_graph().expect("spin node");
                    let first = contract(&sg.graph, &random_subset(&mut rng, sg.graph.num_edges()))?;
                    let second = contract(&first.target, &random_subset(&mut rng, first.target.num_edges()))?;
                    check_chain(&sg, &first, &second)
                })
                .collect::<Result<Vec<()>>>()?;
            Ok((true, json!({ "chains": count, "seed": seed })))
        })?);

        out.push(CheckResult::run("pushforward_onto", || {
            let graphs = ctx.graphs()?;
            let cap = ctx.config.budget.b1_cap;
            let checked = graphs
                .par_iter()
                .map(|c| {
                    let spins = enumerate_spin(&c.graph, cap)?;
                    let mut edges = 0;
                    for e in 0..c.graph.num_edges() {
                        let gamma = contract(&c.graph, &EdgeSet::from_indices(c.graph.num_edges(), [e])?)?;
                        let image: BTreeSet<_> = spins.iter().map(|s| gamma.push_spin(s)).collect::<Result<_>>()?;
                        let target: BTreeSet<_> = enumerate_spin(&gamma.target, cap)?.into_iter().collect();
                        if image != target {
                            return Err(Error::verification(
                                format!("graph {} contracting edge {e}", c.key),
                                "pushforward of spin structures is not onto",
                            ));
                        }
                        edges += 1;
                    }
                    Ok(edges)
                })
                .collect::<Result<Vec<usize>>>()?;
            Ok((true, json!({ "graphs": graphs.len(), "contractions": checked.iter().sum::<usize>() })))
        })?);

        out.push(CheckResult::run("family_diagram", || {
            let count = ctx.fuzz_or(DEFAULT_FAMILIES);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xfa11);
            let mut families = Vec::with_capacity(count);
            for _ in 0..count {
                let sg = spin.nodes[rng.gen_range(0..spin.nodes.len())].spin_graph().expect("spin node");
                families.push(random_family(&mut rng, sg)?);
            }
            let witnesses = families
                .par_iter()
                .map(|fam| {
                    trop_family(fam)?;
                    let report = diagram_check(fam)?;
                    if !report.commutes {
                        return Err(Error::verification(
                            format!("family over {}", spin_key(&fam.special.graph, &fam.special.spin)),
                            "π^trop∘Trop differs from Trop of the stable model",
                        ));
                    }
                    let generic = family_generic_fiber(fam)?;
                    Ok(generic.order_witness.contracted.count())
                })
                .collect::<Result<Vec<usize>>>()?;
            let smoothed_all = witnesses.iter().filter(|&&k| k > 0).count();
            Ok((true, json!({ "families": count, "seed": seed ^ 0xfa11, "nontrivial_witnesses": smoothed_all })))
        })?);
        Ok(out)
    }
}
