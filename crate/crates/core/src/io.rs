//! JSON wire formats for graphs and DOT rendering.

use std::collections::HashMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VertexJson {
    pub id: usize,
    pub weight: u32,
}

/// Raw half-edge data, for round trips that must preserve half-edge ids.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HalfEdgesJson {
    pub endpoint: Vec<usize>,
    pub involution: Vec<usize>,
    pub legs: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub legs: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_edges: Option<HalfEdgesJson>,
}

impl GraphJson {
    /// The half-edge block is emitted only when the graph's numbering
    /// differs from the one rebuilt from the edge list.
    pub fn from_graph(g: &Graph) -> Self {
        let edges: Vec<[usize; 2]> = (0..g.num_edges())
            .map(|e| {
                let (a, b) = g.edge_ends(e);
                [a, b]
            })
            .collect();
        let legs = g.leg_vertices();
        let pairs: Vec<(usize, usize)> = edges.iter().map(|&[a, b]| (a, b)).collect();
        let rebuilt = Graph::new(g.weights().to_vec(), &pairs, &legs).ok();
        let half_edges = (rebuilt.as_ref() != Some(g)).then(|| HalfEdgesJson {
            endpoint: g.endpoints().to_vec(),
            involution: g.involution_map().to_vec(),
            legs: g.legs().to_vec(),
        });
        GraphJson {
            vertices: g.weights().iter().enumerate().map(|(id, &weight)| VertexJson { id, weight }).collect(),
            edges,
            legs,
            half_edges,
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        let mut position: HashMap<usize, usize> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if position.insert(v.id, i).is_some() {
                return Err(Error::Input(format!("duplicate vertex id {}", v.id)));
            }
        }
        let at = |id: usize| position.get(&id).copied().ok_or_else(|| Error::Input(format!("unknown vertex id {id}")));
        let weights: Vec<u32> = self.vertices.iter().map(|v| v.weight).collect();
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[a, b]| Ok((at(a)?, at(b)?))).collect::<Result<_>>()?;
        let legs: Vec<usize> = self.legs.iter().map(|&v| at(v)).collect::<Result<_>>()?;
        let Some(h) = &self.half_edges else {
            return Graph::new(weights, &edges, &legs);
        };
        let endpoint: Vec<usize> = h.endpoint.iter().map(|&v| at(v)).collect::<Result<_>>()?;
        let g = Graph::from_half_edges(weights, endpoint, h.involution.clone(), h.legs.clone())?;
        let same_edges = g.num_edges() == edges.len()
            && edges.iter().enumerate().all(|(e, &(a, b))| {
                let (x, y) = g.edge_ends(e);
                (x, y) == (a, b) || (x, y) == (b, a)
            });
        if !same_edges || g.leg_vertices() != legs {
            return Err(Error::Input("half_edges block disagrees with the edge and leg lists".into()));
        }
        Ok(g)
    }
}

/// DOT for one graph: vertices labeled by weight, legs as point stubs.
pub fn graph_to_dot(g: &Graph, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "graph \"{name}\" {{").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for v in 0..g.num_vertices() {
        writeln!(out, "  v{v} [label=\"{}\"];", g.weight(v)).unwrap();
    }
    for e in 0..g.num_edges() {
        let (a, b) = g.edge_ends(e);
        writeln!(out, "  v{a} -- v{b} [label=\"e{e}\"];").unwrap();
    }
    for (i, v) in g.leg_vertices().into_iter().enumerate() {
        writeln!(out, "  l{i} [shape=point];").unwrap();
        writeln!(out, "  v{v} -- l{i} [label=\"{}\"];", i + 1).unwrap();
    }
    out.push_str("}\n");
    out
}
