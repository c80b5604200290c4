//! Poset and cell-table exporters, selected by format name.

use std::fmt::Write;

use serde::Serialize;

use crate::error::Result;
use crate::io::GraphJson;
use crate::posets::{Poset, PosetKind};
use crate::registry::{Named, Registry};
use crate::spin::{Parity, SpinJson};
use crate::tropical::ConeComplex;

/// What an exporter receives: the poset and, for spin posets, its cone complex.
pub struct ExportInput<'a> {
    pub poset: &'a Poset,
    pub cone: Option<&'a ConeComplex>,
}

pub trait Exporter: Named + Send + Sync {
    fn extension(&self) -> &'static str;
    fn export(&self, input: &ExportInput<'_>) -> Result<String>;
}

#[derive(Serialize)]
struct NodeJson {
    index: usize,
    key: String,
    rank: usize,
    graph_class: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    parity: Option<Parity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    spin: Option<SpinJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    aut_order: Option<usize>,
    graph: GraphJson,
}

#[derive(Serialize)]
struct PosetJson {
    kind: PosetKind,
    g: u32,
    n: usize,
    rank_histogram: Vec<usize>,
    nodes: Vec<NodeJson>,
    /// `[upper, lower]` index pairs.
    covers: Vec<[usize; 2]>,
}

pub struct JsonExporter;

impl Named for JsonExporter {
    fn name(&self) -> &'static str {
        "json"
    }
    fn description(&self) -> &'static str {
        "nodes with keys, ranks, parities and graphs; covers as index pairs"
    }
}

impl Exporter for JsonExporter {
    fn extension(&self) -> &'static str {
        "json"
    }

    fn export(&self, input: &ExportInput<'_>) -> Result<String> {
        let p = input.poset;
        let nodes = p
            .nodes
            .iter()
            .enumerate()
            .map(|(i, c)| NodeJson {
                index: i,
                key: c.key.to_hex(),
                rank: c.rank,
                graph_class: c.graph_class,
                parity: c.parity(),
                cycle: c.cycle.map(|x| x.to_hex()),
                spin: c.spin.as_ref().map(|s| s.to_json()),
                aut_order: input.cone.map(|cone| cone.cells[i].aut_order),
                graph: GraphJson::from_graph(&c.graph),
            })
            .collect();
        let json = PosetJson {
            kind: p.kind,
            g: p.g,
            n: p.n,
            rank_histogram: p.rank_histogram(),
            nodes,
            covers: p.covers.iter().map(|&(u, l)| [u, l]).collect(),
        };
        Ok(serde_json::to_string_pretty(&json)? + "\n")
    }
}

pub struct DotExporter;

impl Named for DotExporter {
    fn name(&self) -> &'static str {
        "dot"
    }
    fn description(&self) -> &'static str {
        "Hasse diagram, spin classes colored by parity"
    }
}

impl Exporter for DotExporter {
    fn extension(&self) -> &'static str {
        "dot"
    }

    fn export(&self, input: &ExportInput<'_>) -> Result<String> {
        let p = input.poset;
        let mut out = String::new();
        writeln!(out, "digraph hasse {{").unwrap();
        writeln!(out, "  rankdir=BT;").unwrap();
        writeln!(out, "  node [shape=box, style=filled, fillcolor=white];").unwrap();
        for (i, c) in p.nodes.iter().enumerate() {
            let color = match c.parity() {
                Some(Parity::Even) => "lightblue",
                Some(Parity::Odd) => "salmon",
                None => "white",
            };
            writeln!(out, "  n{i} [label=\"{} r{}\", fillcolor={color}];", c.key.short(), c.rank).unwrap();
        }
        for &(u, l) in &p.covers {
            writeln!(out, "  n{l} -> n{u};").unwrap();
        }
        out.push_str("}\n");
        Ok(out)
    }
}

pub struct CsvExporter;

impl Named for CsvExporter {
    fn name(&self) -> &'static str {
        "csv"
    }
    fn description(&self) -> &'static str {
        "one row per class: key, dimension, parity, automorphism order"
    }
}

impl Exporter for CsvExporter {
    fn extension(&self) -> &'static str {
        "csv"
    }

    fn export(&self, input: &ExportInput<'_>) -> Result<String> {
        let p = input.poset;
        let mut out = String::from("key,dim,parity,aut_order\n");
        for (i, c) in p.nodes.iter().enumerate() {
            let parity = c.parity().map_or(String::new(), |x| x.to_string());
            let aut = input.cone.map_or(String::new(), |cone| cone.cells[i].aut_order.to_string());
            writeln!(out, "{},{},{parity},{aut}", c.key.to_hex(), c.rank).unwrap();
        }
        Ok(out)
    }
}

pub fn exporter_registry() -> Registry<dyn Exporter> {
    let mut r: Registry<dyn Exporter> = Registry::new("format");
    r.register(Box::new(JsonExporter)).register(Box::new(DotExporter)).register(Box::new(CsvExporter));
    r
}
