//! `spinmod`: enumerate moduli posets of spin graphs, run verification
//! suites, and tropicalize families.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use spinmod::export::{exporter_registry, ExportInput};
use spinmod::posets::{build_poset, poset_stats, Budget, PosetKind};
use spinmod::suites::{suite_registry, verify, SuiteConfig, DEFAULT_SEED};
use spinmod::tropical::{
    build_cone_complex, diagram_check, family_generic_fiber, pi_trop_fiber, trop_family, FamilyDescriptor, FamilyJson,
    TropicalCurveJson,
};
use spinmod::{Error, Result};

#[derive(Parser)]
#[command(name = "spinmod", version, about = "Spin graphs and tropical spin curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a moduli poset and export it.
    Enumerate {
        #[command(flatten)]
        common: Common,
        /// graphs, cyclic or spin.
        #[arg(long, default_value = "spin")]
        kind: String,
        /// json, dot or csv.
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// counts, posets, functoriality, refine, tropical or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Number of random chains and families (defaults: 1000 and 100).
        #[arg(long)]
        fuzz: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Tropicalize a family given as JSON.
    Trop {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fiber of the forgetful map over a tropical curve given as JSON.
    Fiber {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List registered suites, formats and enumerators.
    List,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    g: u32,
    #[arg(long, default_value_t = 0)]
    n: usize,
    /// Output directory; data goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest 3g-3+n accepted.
    #[arg(long)]
    budget_edges: Option<usize>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
}

/// `SPINMOD_BUDGET`: either `N` (edge cap) or a comma list of
/// `edges=N` and `b1=M`.
fn budget_from(env: Option<String>, flag: Option<usize>) -> Result<Budget> {
    let mut budget = Budget::default();
    if let Some(spec) = env.filter(|s| !s.trim().is_empty()) {
        for part in spec.split(',') {
            let (key, value) = part.split_once('=').unwrap_or(("edges", part));
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("SPINMOD_BUDGET: cannot parse '{part}'")))?;
            match key.trim() {
                "edges" => budget.max_edges = value,
                "b1" => budget.b1_cap = value,
                other => return Err(Error::Input(format!("SPINMOD_BUDGET: unknown cap '{other}'"))),
            }
        }
    }
    if let Some(edges) = flag {
        budget.max_edges = edges;
    }
    Ok(budget)
}

fn setup(common: &Common) -> Result<Budget> {
    if let Some(jobs) = common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| Error::Input(format!("thread pool: {e}")))?;
    }
    budget_from(std::env::var("SPINMOD_BUDGET").ok(), common.budget_edges)
}

fn emit(out: Option<&Path>, file_name: &str, data: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(file_name);
            fs::write(&path, data)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{data}"),
    }
    Ok(())
}

fn emit_file(out: Option<&Path>, data: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, data)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{data}"),
    }
    Ok(())
}

fn cmd_enumerate(common: &Common, kind: &str, format: &str) -> Result<bool> {
    let budget = setup(common)?;
    let kind: PosetKind = kind.parse()?;
    let exporters = exporter_registry();
    let exporter = exporters.get(format)?;
    let start = Instant::now();
    let poset = build_poset(kind, common.g, common.n, &budget)?;
    let stats = poset_stats(&poset)?;
    let cone = if kind == PosetKind::Spin { Some(build_cone_complex(&poset)?) } else { None };
    let data = exporter.export(&ExportInput { poset: &poset, cone: cone.as_ref() })?;
    let name = format!("{}_g{}_n{}.{}", format!("{kind:?}").to_lowercase(), common.g, common.n, exporter.extension());
    emit(common.out.as_deref(), &name, &data)?;
    eprintln!("nodes: {}", stats.nodes);
    eprintln!("covers: {}", stats.covers);
    eprintln!("rank histogram: {:?}", stats.rank_histogram);
    eprintln!("components: {}", stats.components);
    if kind == PosetKind::Spin {
        let even = poset.nodes.iter().filter(|c| c.parity() == Some(spinmod::spin::Parity::Even)).count();
        eprintln!("parity: {even} even, {} odd", poset.nodes.len() - even);
    }
    eprintln!("time: {} ms", start.elapsed().as_millis());
    Ok(true)
}

fn cmd_verify(common: &Common, suite: &str, fuzz: Option<usize>, seed: u64) -> Result<bool> {
    let budget = setup(common)?;
    let config = SuiteConfig { g: common.g, n: common.n, budget, fuzz, seed };
    if fuzz.is_some() {
        eprintln!("fuzz seed: {seed}");
    }
    let report = verify(suite, config)?;
    let data = serde_json::to_string_pretty(&report)? + "\n";
    emit(common.out.as_deref(), &format!("verify_{suite}_g{}_n{}.json", common.g, common.n), &data)?;
    for c in &report.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        match &c.witness {
            Some(w) => eprintln!("{mark} {} (witness: {w})", c.name),
            None => eprintln!("{mark} {}", c.name),
        }
    }
    eprintln!(
        "{} checks, {} failed, {} ms",
        report.checks.len(),
        report.failures().count(),
        report.elapsed_ms
    );
    Ok(report.passed())
}

fn read_json<T: serde::de::DeserializeOwned>(file: &Path) -> Result<T> {
    let text = fs::read_to_string(file)?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", file.display())))
}

fn cmd_trop(file: &Path, out: Option<&Path>) -> Result<bool> {
    let fam = FamilyDescriptor::from_json(&read_json::<FamilyJson>(file)?)?;
    let psi = trop_family(&fam)?;
    let diagram = diagram_check(&fam)?;
    let generic = family_generic_fiber(&fam)?;
    let report = json!({
        "trop": psi.to_json(),
        "stable_model": diagram.stable_model,
        "pi_trop_of_trop": diagram.pi_trop_of_trop,
        "commutes": diagram.commutes,
        "generic_fiber": generic.to_json(),
    });
    emit_file(out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    eprintln!("diagram commutes: {}", diagram.commutes);
    eprintln!("generic fiber: {} vertices, {} edges", generic.spin_graph.graph.num_vertices(), generic.spin_graph.graph.num_edges());
    Ok(diagram.commutes)
}

fn cmd_fiber(file: &Path, out: Option<&Path>) -> Result<bool> {
    let curve = read_json::<TropicalCurveJson>(file)?.to_curve()?;
    let reps = pi_trop_fiber(&curve, Budget::default().b1_cap)?;
    let data: Vec<_> = reps.iter().map(|r| r.to_json()).collect();
    emit_file(out, &(serde_json::to_string_pretty(&data)? + "\n"))?;
    eprintln!("fiber size: {}", reps.len());
    Ok(true)
}

fn cmd_list() -> Result<bool> {
    println!("suites:");
    for s in suite_registry().iter() {
        println!("  {:<14} {}", s.name(), s.description());
    }
    println!("formats:");
    for e in exporter_registry().iter() {
        println!("  {:<14} {}", e.name(), e.description());
    }
    println!("enumerators:");
    for e in spinmod::posets::enumerator_registry().iter() {
        println!("  {:<14} {}", e.name(), e.description());
    }
    Ok(true)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification { .. } => 1,
        Error::Budget(_) => 3,
        Error::Input(_) | Error::Domain(_) | Error::Json(_) | Error::Io(_) => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Enumerate { common, kind, format } => cmd_enumerate(common, kind, format),
        Command::Verify { common, suite, fuzz, seed } => cmd_verify(common, suite, *fuzz, *seed),
        Command::Trop { file, out } => cmd_trop(file, out.as_deref()),
        Command::Fiber { file, out } => cmd_fiber(file, out.as_deref()),
        Command::List => cmd_list(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
