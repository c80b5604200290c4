use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::morphisms::sequence_check;
use crate::posets::{check_forgetful_maps, enumerator_registry, poset_stats, PosetKind};
use crate::registry::Named;
use crate::tropical::{build_cone_complex, check_face_relation, PairSelection};

use super::{CheckResult, Context, Suite};

/// Posets larger than this get a sampled face-relation check.
pub const FACE_CHECK_ALL_PAIRS_UP_TO: usize = 500;
pub const FACE_CHECK_SAMPLES: usize = 3000;

/// Structure of the moduli posets and the cone complex.
pub struct PosetsSuite;

impl Named for PosetsSuite {
    fn name(&self) -> &'static str {
        "posets"
    }
    fn description(&self) -> &'static str {
        "gradedness, components, forgetful maps, cone complex, face relation and automorphism sequences"
    }
}

impl Suite for PosetsSuite {
    fn checks(&self, ctx: &Context) -> Result<Vec<CheckResult>> {
        let mut out = Vec::new();
        for (name, kind) in [("graph_poset", PosetKind::Graphs), ("cyclic_poset", PosetKind::Cyclic), ("spin_poset", PosetKind::Spin)] {
            out.push(CheckResult::run(name, || {
                let stats = poset_stats(ctx.poset(kind)?)?;
                Ok((true, serde_json::to_value(stats)?))
            })?);
        }

        out.push(CheckResult::run("forgetful_maps", || {
            check_forgetful_maps(ctx.poset(PosetKind::Spin)?, ctx.poset(PosetKind::Cyclic)?, ctx.poset(PosetKind::Graphs)?)?;
            Ok((true, json!({})))
        })?);

        out.push(CheckResult::run("cone_complex", || {
            let cone = build_cone_complex(ctx.poset(PosetKind::Spin)?)?;
            let p = &cone.purity;
            let expected = if ctx.config.g > 0 { 2 } else { 1 };
            Ok((p.pure && p.components == expected, json!({ "cells": cone.cells.len(), "purity": p })))
        })?);

        out.push(CheckResult::run("face_relation", || {
            let spin = ctx.poset(PosetKind::Spin)?;
            let selection = if spin.nodes.len() <= FACE_CHECK_ALL_PAIRS_UP_TO {
                PairSelection::All
            } else {
                PairSelection::Sample { count: FACE_CHECK_SAMPLES, seed: ctx.config.seed }
            };
            let report = check_face_relation(spin, selection)?;
            let mode = if matches!(selection, PairSelection::All) { "all pairs" } else { "sampled" };
            Ok((true, json!({ "mode": mode, "report": report })))
        })?);

        out.push(CheckResult::run("automorphism_sequence", || {
            let spin = ctx.poset(PosetKind::Spin)?;
            let reports = spin
                .nodes
                .par_iter()
                .map(|node| {
                    sequence_check(&node.spin_graph().expect("spin node")).map_err(|e| match e {
                        Error::Verification { message, .. } => Error::verification(format!("class {}", node.key), message),
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(i) = reports.iter().position(|r| !r.holds_half_edge) {
                return Err(Error::verification(format!("class {}", spin.nodes[i].key), "|Aut(G,P,s)| ≠ |Aut(P̄)|·|Aut_G(G/P,s)|"));
            }
            let edge_action_failures = reports.iter().filter(|r| !r.holds_edge_action).count();
            let proper = reports.iter().filter(|r| r.image_is_proper).count();
            Ok((
                true,
                json!({
                    "classes": reports.len(),
                    "edge_action_identity_fails": edge_action_failures,
                    "image_proper_subgroup": proper,
                }),
            ))
        })?);

        out.push(CheckResult::run("enumerators_agree", || {
            let registry = enumerator_registry();
            let reference = ctx.graphs()?;
            let mut checked = Vec::new();
            for strategy in registry.iter() {
                let found = strategy.enumerate(ctx.config.g, ctx.config.n, &ctx.config.budget)?;
                let same = found.len() == reference.len() && found.iter().zip(reference).all(|(a, b)| a.key == b.key);
                if !same {
                    return Err(Error::verification(
                        format!("enumerator {}", strategy.name()),
                        format!("{} classes against {}", found.len(), reference.len()),
                    ));
                }
                checked.push(strategy.name());
            }
            Ok((true, json!({ "strategies": checked, "classes": reference.len() })))
        })?);
        Ok(out)
    }
}
