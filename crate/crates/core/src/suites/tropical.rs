use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fixtures::{loop_with_leg, theta};
use crate::graph::Graph;
use crate::posets::PosetKind;
use crate::registry::Named;
use crate::spin::enumerate_spin;
use crate::tropical::{fiber_size_by_burnside, pi_trop_fiber, Length, TropicalCurve};

use super::{CheckResult, Context, Suite};

/// Fibers of `π^trop` over curves with generic and constant lengths.
pub struct TropicalSuite;

impl Named for TropicalSuite {
    fn name(&self) -> &'static str {
        "tropical"
    }
    fn description(&self) -> &'static str {
        "fibers of the forgetful map from spin tropical curves"
    }
}

fn with_lengths(g: &Graph, lengths: impl Fn(usize) -> i64) -> Result<TropicalCurve> {
    TropicalCurve::new(g.clone(), (0..g.num_edges()).map(|e| Length::integer(lengths(e))).collect())
}

impl Suite for TropicalSuite {
    fn checks(&self, ctx: &Context) -> Result<Vec<CheckResult>> {
        let cap = ctx.config.budget.b1_cap;
        let mut out = Vec::new();

        out.push(CheckResult::run("fiber_fixtures", || {
            let sizes = [
                pi_trop_fiber(&with_lengths(&loop_with_leg(), |_| 1)?, cap)?.len(),
                pi_trop_fiber(&with_lengths(&theta(), |e| e as i64 + 1)?, cap)?.len(),
                pi_trop_fiber(&with_lengths(&theta(), |_| 1)?, cap)?.len(),
            ];
            Ok((sizes == [3, 7, 3], json!({ "loop_with_leg": sizes[0], "theta_generic": sizes[1], "theta_constant": sizes[2] })))
        })?);

        out.push(CheckResult::run("fibers", || {
            let graphs = ctx.graphs()?;
            let spin = ctx.poset(PosetKind::Spin)?;
            let mut classes_over = vec![0usize; graphs.len()];
            for node in &spin.nodes {
                classes_over[node.graph_class] += 1;
            }
            let rows = graphs
                .par_iter()
                .enumerate()
                .map(|(i, c)| {
                    let total = enumerate_spin(&c.graph, cap)?.len();
                    let generic = with_lengths(&c.graph, |e| 1 << e)?;
                    let constant = with_lengths(&c.graph, |_| 1)?;
                    let gen_fiber = pi_trop_fiber(&generic, cap)?.len();
                    let const_fiber = pi_trop_fiber(&constant, cap)?.len();
                    let trivial = generic.automorphisms()?.order() == 1;
                    let ok = gen_fiber == fiber_size_by_burnside(&generic, cap)?
                        && const_fiber == fiber_size_by_burnside(&constant, cap)?
                        && const_fiber == classes_over[i]
                        && const_fiber <= gen_fiber
                        && gen_fiber <= total
                        && (!trivial || gen_fiber == total);
                    if !ok {
                        return Err(Error::verification(
                            format!("graph {}", c.key),
                            format!("fiber sizes generic {gen_fiber}, constant {const_fiber}, |SP_G| {total}"),
                        ));
                    }
                    Ok(gen_fiber)
                })
                .collect::<Result<Vec<usize>>>()?;
            Ok((true, json!({ "graphs": rows.len(), "generic_fiber_total": rows.iter().sum::<usize>() })))
        })?);
        Ok(out)
    }
}
