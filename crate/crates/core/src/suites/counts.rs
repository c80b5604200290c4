use rayon::prelude::*;
use serde_json::json;

use crate::cycles::enumerate_cyclic;
use crate::error::{Error, Result};
use crate::registry::Named;
use crate::spin::{g_collections, spin_count_check, stratum_counts, theta_divisors};

use super::{CheckResult, Context, Suite};

/// Counting identities on every graph of `S_{g,n}`.
pub struct CountsSuite;

impl Named for CountsSuite {
    fn name(&self) -> &'static str {
        "counts"
    }
    fn description(&self) -> &'static str {
        "theta-characteristic counts, spin structure counts, theta divisors and G-collections"
    }
}

impl Suite for CountsSuite {
    fn checks(&self, ctx: &Context) -> Result<Vec<CheckResult>> {
        let graphs = ctx.graphs()?;
        let (g, n) = (ctx.config.g, ctx.config.n);
        let cap = ctx.config.budget.b1_cap;
        let witness = |i: usize| format!("graph {}", graphs[i].key);
        let mut out = Vec::new();

        out.push(CheckResult::run("graph_invariants", || {
            for (i, c) in graphs.iter().enumerate() {
                let gr = &c.graph;
                if !gr.is_stable() || gr.genus() != g || gr.num_legs() != n || gr.num_edges() > 3 * g as usize + n - 3 {
                    return Err(Error::verification(witness(i), "not a stable graph of the requested type"));
                }
            }
            Ok((true, json!({ "graphs": graphs.len() })))
        })?);

        out.push(CheckResult::run("theta_characteristics", || {
            let reports = graphs
                .par_iter()
                .enumerate()
                .map(|(i, c)| stratum_counts(&c.graph, cap).map_err(|e| relabel(e, witness(i))))
                .collect::<Result<Vec<_>>>()?;
            let expected = 1u128 << (2 * g);
            let passed = reports.iter().all(|r| r.grand_total == expected);
            let even: u128 = reports.iter().map(|r| r.even_total).sum();
            let odd: u128 = reports.iter().map(|r| r.odd_total).sum();
            Ok((passed, json!({ "graphs": reports.len(), "degree": expected.to_string(), "even_total": even.to_string(), "odd_total": odd.to_string() })))
        })?);

        out.push(CheckResult::run("spin_structure_counts", || {
            let reports = graphs
                .par_iter()
                .enumerate()
                .map(|(i, c)| spin_count_check(&c.graph, cap).map_err(|e| relabel(e, witness(i))))
                .collect::<Result<Vec<_>>>()?;
            let tight = reports.iter().filter(|r| r.bound_tight).count();
            let total: usize = reports.iter().map(|r| r.total).sum();
            Ok((true, json!({ "graphs": reports.len(), "spin_structures": total, "bound_tight": tight })))
        })?);

        out.push(CheckResult::run("theta_divisors", || {
            let mut checked = 0usize;
            for (i, c) in graphs.iter().enumerate() {
                let gr = &c.graph;
                for p in enumerate_cyclic(gr, cap)? {
                    let t = theta_divisors(gr, &p)?;
                    let k = gr.remove_edges(&p.complement(), true)?.canonical_divisor();
                    let doubled: Vec<i64> = t.graph_divisor.iter().map(|d| 2 * d).collect();
                    if doubled != k.values() || t.tropical_degree() != g as i64 - 1 {
                        return Err(Error::verification(witness(i), format!("theta divisor fails for P = {}", p.to_hex())));
                    }
                    checked += 1;
                }
            }
            Ok((true, json!({ "cyclic_sets": checked })))
        })?);

        out.push(CheckResult::run("g_collections", || {
            let mut basic = 0usize;
            for (i, c) in graphs.iter().enumerate() {
                if c.graph.is_basic() {
                    g_collections(&c.graph).map_err(|e| relabel(e, witness(i)))?;
                    basic += 1;
                }
            }
            Ok((true, json!({ "basic_graphs": basic })))
        })?);
        Ok(out)
    }
}

/// Prefixes a verification witness with the graph it came from.
pub(super) fn relabel(e: Error, graph: String) -> Error {
    match e {
        Error::Verification { witness, message } => Error::verification(format!("{graph}: {witness}"), message),
        other => other,
    }
}
