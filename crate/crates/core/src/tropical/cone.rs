use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphisms::{automorphisms, order_test, AutRestriction, CanonicalKey};
use crate::posets::{poset_stats, Poset, PosetKind};
use crate::spin::Parity;

/// A cell `σ°_{(G,P,s)} / Aut(G,P,s)`, stored combinatorially.
#[derive(Clone, Debug, Serialize)]
pub struct ConeCell {
    /// Index of the class in the spin poset.
    pub node: usize,
    pub key: CanonicalKey,
    pub dim: usize,
    pub parity: Parity,
    /// Order of the action of `Aut(G,P,s)` on vertices and edges.
    pub aut_order: usize,
    pub aut_order_half_edge: usize,
    /// Cells of dimension `dim + 1` whose closure contains this one.
    pub face_of: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PurityReport {
    pub dimension: usize,
    pub pure: bool,
    pub components: usize,
    pub maximal_cells: usize,
    pub maximal_even: usize,
    pub maximal_odd: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeComplex {
    pub g: u32,
    pub n: usize,
    pub cells: Vec<ConeCell>,
    pub purity: PurityReport,
}

/// One cell per class of the spin poset, with faces read off the covers.
/// Fails if the complex is not pure of dimension `3g-3+n` or has the wrong
/// number of connected components.
pub fn build_cone_complex(poset: &Poset) -> Result<ConeComplex> {
    if poset.kind != PosetKind::Spin {
        return Err(Error::Input("the cone complex is built from the spin poset".into()));
    }
    let stats = poset_stats(poset)?;
    let upper = poset.upper_covers();
    let cells = poset
        .nodes
        .par_iter()
        .enumerate()
        .map(|(i, node)| {
            let spin = node.spin.as_ref().expect("spin node");
            let orders = automorphisms(&node.graph, AutRestriction::Spin(spin))?.orders();
            let mut face_of = upper[i].clone();
            face_of.sort_unstable();
            Ok(ConeCell {
                node: i,
                key: node.key.clone(),
                dim: node.rank,
                parity: spin.parity(),
                aut_order: orders.edge_action,
                aut_order_half_edge: orders.half_edge,
                face_of,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let dimension = poset.top_rank();
    let maximal: Vec<&ConeCell> = cells.iter().filter(|c| c.dim == dimension).collect();
    Ok(ConeComplex {
        g: poset.g,
        n: poset.n,
        purity: PurityReport {
            dimension,
            pure: stats.pure,
            components: stats.components,
            maximal_cells: maximal.len(),
            maximal_even: maximal.iter().filter(|c| c.parity == Parity::Even).count(),
            maximal_odd: maximal.iter().filter(|c| c.parity == Parity::Odd).count(),
        },
        cells,
    })
}

/// Which ordered pairs of cells to compare.
#[derive(Clone, Copy, Debug)]
pub enum PairSelection {
    All,
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceRelationReport {
    pub pairs_checked: usize,
    pub related: usize,
}

/// Checks that "`B` is a face of `A`", decided by searching for a
/// contraction `A → B` of spin graphs, agrees with the transitive closure of
/// the poset covers.
pub fn check_face_relation(poset: &Poset, selection: PairSelection) -> Result<FaceRelationReport> {
    let size = poset.nodes.len();
    let pairs: Vec<(usize, usize)> = match selection {
        PairSelection::All => (0..size).flat_map(|a| (0..size).map(move |b| (a, b))).collect(),
        PairSelection::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|_| (rng.gen_range(0..size), rng.gen_range(0..size))).collect()
        }
    };
    let below = poset.down_sets();
    let results = pairs
        .par_iter()
        .map(|&(a, b)| {
            let sa = poset.nodes[a].spin_graph().expect("spin node");
            let sb = poset.nodes[b].spin_graph().expect("spin node");
            let by_search = order_test(&sa, &sb)?.is_some();
            let by_covers = below[a][b / 64] >> (b % 64) & 1 == 1;
            if by_search != by_covers {
                return Err(Error::verification(
                    format!("cells {} and {}", poset.nodes[a].key, poset.nodes[b].key),
                    format!("contraction search says {by_search}, poset order says {by_covers}"),
                ));
            }
            Ok(by_covers)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(FaceRelationReport { pairs_checked: pairs.len(), related: results.iter().filter(|&&x| x).count() })
}
