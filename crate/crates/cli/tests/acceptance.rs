//! Acceptance run: one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use spinmod::fixtures::{loop_with_leg, theta};
use spinmod::posets::{build_poset, build_spin_poset, is_nonempty, Budget, PosetKind};
use spinmod::spin::{enumerate_spin, stratum_counts, Parity};
use spinmod::suites::{verify, CheckResult, SuiteConfig, SuiteReport};
use spinmod::tropical::{pi_trop_fiber, Length, TropicalCurve};
use spinmod::Graph;

const RUNTIME_LIMIT: Duration = Duration::from_secs(600);

type Outcome = Result<String, String>;

fn small_types(max_g: u32, max_n: usize) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    for g in 0..=max_g {
        for n in 0..=max_n {
            if is_nonempty(g, n) {
                out.push((g, n));
            }
        }
    }
    out
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn find<'a>(report: &'a SuiteReport, name: &str) -> &'a CheckResult {
    report.checks.iter().find(|c| c.name == name).expect("check present")
}

fn run(suite: &str, g: u32, n: usize) -> Result<SuiteReport, String> {
    verify(suite, SuiteConfig::new(g, n)).map_err(|e| format!("({g},{n}) {suite}: {e}"))
}

fn require<'a>(report: &'a SuiteReport, name: &str) -> Result<&'a CheckResult, String> {
    let c = find(report, name);
    ensure(c.passed, || format!("({},{}) {name} failed: {}", report.g, report.n, c.witness.clone().unwrap_or_default()))?;
    Ok(c)
}

// Even-degree edge subsets and component data, computed from scratch.

fn components(g: &Graph, mask: u64) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..g.num_vertices()).collect();
    fn root(p: &mut [usize], x: usize) -> usize {
        if p[x] == x { x } else { let r = root(p, p[x]); p[x] = r; r }
    }
    for e in (0..g.num_edges()).filter(|e| mask >> e & 1 == 1) {
        let (a, b) = g.edge_ends(e);
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        parent[ra] = rb;
    }
    (0..g.num_vertices()).map(|v| root(&mut parent, v)).collect()
}

fn cyclic_masks(g: &Graph) -> Vec<u64> {
    (0u64..1 << g.num_edges())
        .filter(|&m| {
            let mut deg = vec![0usize; g.num_vertices()];
            for e in (0..g.num_edges()).filter(|e| m >> e & 1 == 1) {
                let (a, b) = g.edge_ends(e);
                deg[a] += 1;
                deg[b] += 1;
            }
            deg.iter().all(|d| d % 2 == 0)
        })
        .collect()
}

/// Per component of `(V, P)`: total weight and cycle rank.
fn pbar_parts(g: &Graph, mask: u64) -> Vec<(u32, u32)> {
    let comp = components(g, mask);
    let mut parts = std::collections::BTreeMap::<usize, (u32, i64, i64)>::new();
    for v in 0..g.num_vertices() {
        let p = parts.entry(comp[v]).or_default();
        p.0 += g.weight(v);
        p.2 += 1;
    }
    for e in (0..g.num_edges()).filter(|e| mask >> e & 1 == 1) {
        parts.get_mut(&comp[g.edge_ends(e).0]).unwrap().1 += 1;
    }
    parts.values().map(|&(w, edges, verts)| (w, (edges - verts + 1) as u32)).collect()
}

fn smooth_split(h: u32) -> (u128, u128) {
    if h == 0 {
        return (1, 0);
    }
    let a = 1u128 << h;
    (a / 2 * (a + 1), a / 2 * (a - 1))
}

/// Theta characteristics over a curve with dual graph `g`: (total, even).
fn theta_oracle(g: &Graph) -> (u128, u128) {
    let b1 = g.num_edges() + 1 - g.num_vertices();
    let (mut total, mut even) = (0u128, 0u128);
    for m in cyclic_masks(g) {
        let rank_p: u32 = pbar_parts(g, m).iter().map(|p| p.1).sum();
        let mut dist = (1u128, 0u128);
        for (w, c) in pbar_parts(g, m) {
            let (e, o) = if c > 0 {
                let half = 1u128 << (c + 2 * w - 1);
                (half, half)
            } else {
                smooth_split(w)
            };
            dist = (dist.0 * e + dist.1 * o, dist.0 * o + dist.1 * e);
        }
        let length = 1u128 << (b1 as u32 - rank_p);
        total += (dist.0 + dist.1) * length;
        even += dist.0 * length;
    }
    (total, even)
}

fn criterion_1() -> Outcome {
    let budget = Budget::default();
    let mut graphs = 0;
    for (g, n) in small_types(3, 2) {
        let (want_total, want_even) = (1u128 << (2 * g), smooth_split(g).0);
        for c in build_poset(PosetKind::Graphs, g, n, &budget).map_err(|e| e.to_string())?.nodes {
            let (total, even) = theta_oracle(&c.graph);
            let lib = stratum_counts(&c.graph, budget.b1_cap).map_err(|e| e.to_string())?;
            ensure(total == want_total && even == want_even, || format!("({g},{n}) graph {}: oracle {total}/{even}", c.key))?;
            ensure(lib.grand_total == total && lib.even_total == even, || format!("({g},{n}) graph {}: library disagrees", c.key))?;
            graphs += 1;
        }
    }
    Ok(format!("{graphs} graphs with g ≤ 3, n ≤ 2: 2^(2g) total, smooth even count"))
}

fn criterion_2() -> Outcome {
    let budget = Budget::default();
    let (mut graphs, mut tight) = (0, 0);
    for (g, n) in small_types(3, 2) {
        for c in build_poset(PosetKind::Graphs, g, n, &budget).map_err(|e| e.to_string())?.nodes {
            let gr = &c.graph;
            let oracle: usize = cyclic_masks(gr)
                .into_iter()
                .map(|m| 1usize << pbar_parts(gr, m).iter().filter(|&&(w, r)| w + r > 0).count())
                .sum();
            let spins = enumerate_spin(gr, budget.b1_cap).map_err(|e| e.to_string())?;
            let bound = (1usize << (gr.b1() + 1)) - 1;
            ensure(spins.len() == oracle && oracle >= bound, || format!("({g},{n}) graph {}: {} vs {oracle}", c.key, spins.len()))?;
            tight += (oracle == bound) as usize;
            graphs += 1;
        }
        require(&run("counts", g, n)?, "spin_structure_counts")?;
    }
    Ok(format!("{graphs} graphs, |SP_G| matches Σ_P 2^c⁺ and the lower bound, {tight} tight"))
}

fn criterion_3() -> Outcome {
    let budget = Budget::default();
    let s11 = build_poset(PosetKind::Graphs, 1, 1, &budget).map_err(|e| e.to_string())?.nodes.len();
    let s20 = build_poset(PosetKind::Graphs, 2, 0, &budget).map_err(|e| e.to_string())?.nodes.len();
    let sp11 = build_spin_poset(1, 1, &budget).map_err(|e| e.to_string())?;
    let sp20 = build_spin_poset(2, 0, &budget).map_err(|e| e.to_string())?;
    let top: Vec<_> = sp20.nodes.iter().filter(|c| c.rank == sp20.top_rank()).collect();
    let even = top.iter().filter(|c| c.parity() == Some(Parity::Even)).count();
    let comps = sp11.components().into_iter().max().map_or(0, |m| m + 1);
    let got = (s11, s20, sp11.nodes.len(), comps, top.len(), even);
    ensure(got == (2, 7, 5, 2, 9, 6), || format!("got {got:?}"))?;
    Ok("|S_1,1| = 2, |S_2| = 7, [SP_1,1] has 5 classes in 2 components, 9 maximal in genus 2 (6 even, 3 odd)".into())
}

/// Criteria 4 and 7 share the posets suite.
fn posets() -> Result<Vec<SuiteReport>, String> {
    small_types(3, 1).into_iter().map(|(g, n)| run("posets", g, n)).collect()
}

fn criterion_4(reports: &[SuiteReport]) -> Outcome {
    let mut pairs = 0u64;
    for report in reports {
        require(report, "cone_complex")?;
        let face = require(report, "face_relation")?;
        pairs += face.detail["report"]["pairs_checked"].as_u64().unwrap_or(0);
    }
    Ok(format!("pure cone complexes with 2 components (1 in genus 0), {pairs} face pairs checked"))
}

fn criterion_5() -> Outcome {
    let curve = |g: Graph, ls: &[i64]| TropicalCurve::new(g, ls.iter().map(|&x| Length::integer(x)).collect()).unwrap();
    let sizes: Vec<usize> = [curve(loop_with_leg(), &[1]), curve(theta(), &[1, 2, 3]), curve(theta(), &[1, 1, 1])]
        .iter()
        .map(|c| pi_trop_fiber(c, 24).map(|r| r.len()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(sizes == [3, 7, 3], || format!("fiber sizes {sizes:?}"))?;
    Ok("fibers of sizes 3, 7, 3".into())
}

/// Criteria 6 and 9 share the functoriality suite.
fn functoriality() -> Result<Vec<SuiteReport>, String> {
    small_types(3, 2).into_iter().map(|(g, n)| run("functoriality", g, n)).collect()
}

fn criterion_6(reports: &[SuiteReport]) -> Outcome {
    for r in reports {
        require(r, "contraction_chains")?;
        require(r, "pushforward_onto")?;
    }
    Ok(format!("1000 random contraction chains for each of {} types (g, n)", reports.len()))
}

fn criterion_7(reports: &[SuiteReport]) -> Outcome {
    let (mut classes, mut edge_fails, mut proper) = (0, 0, 0);
    for report in reports {
        let c = require(report, "automorphism_sequence")?;
        classes += c.detail["classes"].as_u64().unwrap_or(0);
        edge_fails += c.detail["edge_action_identity_fails"].as_u64().unwrap_or(0);
        proper += c.detail["image_proper_subgroup"].as_u64().unwrap_or(0);
    }
    Ok(format!(
        "order identity holds on V ∪ H for {classes} classes; on the action on edges it fails for {edge_fails}; image proper for {proper}"
    ))
}

fn criterion_8() -> Outcome {
    let mut details = Vec::new();
    for g in 2..=3 {
        let c = require(&run("refine", g, 0)?, "refine_nonbasic")?.clone();
        details.push(format!("g={g}: {}", c.detail));
    }
    Ok(details.join("; "))
}

fn criterion_9(reports: &[SuiteReport]) -> Outcome {
    for r in reports {
        require(r, "family_diagram")?;
    }
    Ok(format!("100 random families for each of {} types (g, n)", reports.len()))
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_spinmod"))
        .args(["verify", "--g", "3", "--n", "0", "--suite", "all"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), || format!("exit status {}", out.status))?;
    ensure(elapsed < RUNTIME_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("verify --g 3 --n 0 --suite all in {:.1} s", elapsed.as_secs_f64()))
}

fn main() {
    let functoriality = functoriality();
    let posets = posets();
    let results: Vec<(usize, Outcome)> = vec![
        (1, criterion_1()),
        (2, criterion_2()),
        (3, criterion_3()),
        (4, posets.clone().and_then(|r| criterion_4(&r))),
        (5, criterion_5()),
        (6, functoriality.clone().and_then(|r| criterion_6(&r))),
        (7, posets.and_then(|r| criterion_7(&r))),
        (8, criterion_8()),
        (9, functoriality.and_then(|r| criterion_9(&r))),
        (10, criterion_10()),
    ];
    let mut failed = 0;
    for (i, outcome) in &results {
        match outcome {
            Ok(msg) => println!("criterion {i:>2}: PASS  {msg}"),
            Err(msg) => {
                println!("criterion {i:>2}: FAIL  {msg}");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
