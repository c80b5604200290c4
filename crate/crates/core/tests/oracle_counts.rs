use std::collections::HashSet;

use spinmod::morphisms::{automorphisms, AutRestriction};
use spinmod::posets::{build_poset, build_spin_poset, enumerator_registry, Budget, PosetKind};
use spinmod::spin::enumerate_spin;

/// Leaf-labelled rooted trees with every internal vertex of outdegree at
/// least 2, on `m` leaves. `M̄_{0,m+1}` has that many boundary strata.
fn total_partitions(m: usize) -> u64 {
    let full = (1usize << m) - 1;
    let mut tree = vec![0u64; full + 1];
    let mut forest = vec![0u64; full + 1];
    forest[0] = 1;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let mut several = 0;
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let block = sub | low;
            if block != mask {
                several += tree[block] * forest[mask ^ block];
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        tree[mask] = if mask == low { 1 } else { several };
        forest[mask] = tree[mask] + several;
    }
    tree[full]
}

/// `Σ_G |SP_G / Aut(G)|` by Burnside, one graph at a time.
fn spin_classes_by_burnside(g: u32, n: usize) -> usize {
    let budget = Budget::default();
    let graphs = build_poset(PosetKind::Graphs, g, n, &budget).unwrap();
    graphs
        .nodes
        .iter()
        .map(|c| {
            let spins = enumerate_spin(&c.graph, budget.b1_cap).unwrap();
            let set: HashSet<_> = spins.iter().cloned().collect();
            let aut = automorphisms(&c.graph, AutRestriction::None).unwrap();
            let fixed: usize = aut
                .elements()
                .iter()
                .map(|a| {
                    spins
                        .iter()
                        .filter(|s| {
                            let t = a.act_on_spin(&c.graph, s).unwrap();
                            assert!(set.contains(&t));
                            t == **s
                        })
                        .count()
                })
                .sum();
            assert_eq!(fixed % aut.order(), 0);
            fixed / aut.order()
        })
        .sum()
}

#[test]
fn genus_zero_strata_match_total_partitions() {
    assert_eq!([3, 4, 5].map(total_partitions), [4, 26, 236]);
    for n in 4..=6 {
        let p = build_poset(PosetKind::Graphs, 0, n, &Budget::default()).unwrap();
        assert_eq!(p.nodes.len() as u64, total_partitions(n - 1), "n = {n}");
    }
}

#[test]
fn graph_counts_are_frozen_and_enumerators_agree() {
    let frozen = [((1, 1), 2), ((1, 2), 5), ((2, 0), 7), ((2, 1), 16), ((2, 2), 75), ((3, 0), 42), ((3, 1), 181), ((1, 4), 163)];
    let budget = Budget::default();
    for ((g, n), count) in frozen {
        let mut keys = Vec::new();
        for e in enumerator_registry().iter() {
            let found = e.enumerate(g, n, &budget).unwrap();
            assert_eq!(found.len(), count, "({g},{n}) via {}", e.name());
            keys.push(found.into_iter().map(|c| c.key).collect::<Vec<_>>());
        }
        assert!(keys.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn spin_class_counts_match_burnside() {
    let frozen = [((1, 1), 5), ((1, 2), 13), ((2, 0), 29), ((2, 1), 85), ((2, 2), 449), ((3, 0), 408)];
    for ((g, n), count) in frozen {
        let poset = build_spin_poset(g, n, &Budget::default()).unwrap();
        assert_eq!(poset.nodes.len(), count, "({g},{n})");
        assert_eq!(spin_classes_by_burnside(g, n), count, "({g},{n}) by Burnside");
    }
}

#[test]
fn small_posets_have_the_expected_shape() {
    let budget = Budget::default();
    let spin = build_spin_poset(2, 0, &budget).unwrap();
    assert_eq!(spin.rank_histogram(), vec![2, 7, 11, 9]);
    let top: Vec<_> = spin.nodes.iter().filter(|c| c.rank == 3).collect();
    let even = top.iter().filter(|c| c.parity() == Some(spinmod::spin::Parity::Even)).count();
    assert_eq!((even, top.len() - even), (6, 3));

    let p = build_spin_poset(1, 1, &budget).unwrap();
    let components = p.components();
    assert_eq!(components.iter().max().map(|m| m + 1), Some(2));
    assert_eq!(build_spin_poset(0, 3, &budget).unwrap().nodes.len(), 1);
}
