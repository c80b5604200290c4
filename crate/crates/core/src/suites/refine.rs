use rayon::prelude::*;
use serde_json::json;

use crate::error::Result;
use crate::refine::refine_nonbasic;
use crate::registry::Named;

use super::counts::relabel;
use super::{CheckResult, Context, Suite};

/// Refinement of every non-basic Eulerian graph, for both signs.
pub struct RefineSuite;

impl Named for RefineSuite {
    fn name(&self) -> &'static str {
        "refine"
    }
    fn description(&self) -> &'static str {
        "one-edge refinements of non-basic Eulerian graphs with a unique spin lift"
    }
}

impl Suite for RefineSuite {
    fn checks(&self, ctx: &Context) -> Result<Vec<CheckResult>> {
        let graphs = ctx.graphs()?;
        let check = CheckResult::run("refine_nonbasic", || {
            let eligible: Vec<usize> = (0..graphs.len())
                .filter(|&i| {
                    let g = &graphs[i].graph;
                    g.is_eulerian() && g.genus() >= 2 && g.num_edges() > 0 && !g.is_basic()
                })
                .collect();
            let jobs: Vec<(usize, bool)> = eligible.iter().flat_map(|&i| [(i, false), (i, true)]).collect();
            let results = jobs
                .par_iter()
                .map(|&(i, s)| refine_nonbasic(&graphs[i].graph, s).map_err(|e| relabel(e, format!("graph {} with s = {}", graphs[i].key, u8::from(s)))))
                .collect::<Result<Vec<_>>>()?;
            let eulerian = results.iter().filter(|r| r.eulerian).count();
            Ok((
                true,
                json!({
                    "graphs": eligible.len(),
                    "refinements": results.len(),
                    "eulerian_refinements": eulerian,
                    "non_eulerian_refinements": results.len() - eulerian,
                }),
            ))
        })?;
        Ok(vec![check])
    }
}
