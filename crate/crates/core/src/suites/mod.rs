//! Verification suites, each a named strategy run against one `(g, n)`.
//!
//! A suite returns a list of [`CheckResult`]s. A check that finds a
//! counterexample is reported as failed with the offending object named in
//! `witness`; input and budget errors abort the run instead.

use std::sync::OnceLock;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::posets::{enumerate_stable_graphs, Budget, GraphClass, Poset, PosetKind};
use crate::registry::{Named, Registry};

mod counts;
mod functoriality;
mod posets;
mod refine;
mod tropical;

pub use counts::CountsSuite;
pub use functoriality::FunctorialitySuite;
pub use posets::PosetsSuite;
pub use refine::RefineSuite;
pub use tropical::TropicalSuite;

/// Seed used by the random checks unless overridden.
pub const DEFAULT_SEED: u64 = 0x5eed_0001;
pub const DEFAULT_CHAINS: usize = 1000;
pub const DEFAULT_FAMILIES: usize = 100;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub g: u32,
    pub n: usize,
    pub budget: Budget,
    /// Overrides the number of random chains and families.
    pub fuzz: Option<usize>,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn new(g: u32, n: usize) -> Self {
        SuiteConfig { g, n, budget: Budget::default(), fuzz: None, seed: DEFAULT_SEED }
    }
}

/// Shared inputs, computed on first use.
pub struct Context {
    pub config: SuiteConfig,
    graphs: OnceLock<Vec<GraphClass>>,
    posets: [OnceLock<Poset>; 3],
}

impl Context {
    pub fn new(config: SuiteConfig) -> Result<Self> {
        config.budget.check(config.g, config.n)?;
        if 2 * config.g as i64 - 2 + config.n as i64 <= 0 {
            return Err(Error::Input(format!("no stable graphs of genus {} with {} legs", config.g, config.n)));
        }
        Ok(Context { config, graphs: OnceLock::new(), posets: Default::default() })
    }

    pub fn graphs(&self) -> Result<&[GraphClass]> {
        if let Some(g) = self.graphs.get() {
            return Ok(g);
        }
        let graphs = enumerate_stable_graphs(self.config.g, self.config.n, &self.config.budget)?;
        Ok(self.graphs.get_or_init(|| graphs))
    }

    pub fn poset(&self, kind: PosetKind) -> Result<&Poset> {
        let slot = &self.posets[kind as usize];
        if let Some(p) = slot.get() {
            return Ok(p);
        }
        let graphs = self.graphs()?.to_vec();
        let p = Poset::build(kind, self.config.g, self.config.n, graphs, &self.config.budget)?;
        Ok(slot.get_or_init(|| p))
    }

    pub fn fuzz_or(&self, default: usize) -> usize {
        self.config.fuzz.unwrap_or(default)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    /// Runs `f`; a verification error becomes a failed check, other errors
    /// propagate.
    pub fn run(name: &str, f: impl FnOnce() -> Result<(bool, Value)>) -> Result<CheckResult> {
        match f() {
            Ok((passed, detail)) => Ok(CheckResult { name: name.into(), passed, detail, witness: None }),
            Err(Error::Verification { witness, message }) => Ok(CheckResult {
                name: name.into(),
                passed: false,
                detail: json!({ "error": message }),
                witness: Some(witness),
            }),
            Err(e) => Err(e),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub g: u32,
    pub n: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub trait Suite: Named + Send + Sync {
    fn checks(&self, ctx: &Context) -> Result<Vec<CheckResult>>;
}

/// Every other registered suite, in registration order.
pub struct AllSuite {
    parts: Vec<Box<dyn Suite>>,
}

impl Named for AllSuite {
    fn name(&self) -> &'static str {
        "all"
    }
    fn description(&self) -> &'static str {
        "every suite"
    }
}

impl Suite for AllSuite {
    fn checks(&self, ctx: &Context) -> Result<Vec<CheckResult>> {
        let mut out = Vec::new();
        for part in &self.parts {
            for mut c in part.checks(ctx)? {
                c.name = format!("{}/{}", part.name(), c.name);
                out.push(c);
            }
        }
        Ok(out)
    }
}

fn base_suites() -> Vec<Box<dyn Suite>> {
    vec![
        Box::new(CountsSuite),
        Box::new(PosetsSuite),
        Box::new(FunctorialitySuite),
        Box::new(RefineSuite),
        Box::new(TropicalSuite),
    ]
}

pub fn suite_registry() -> Registry<dyn Suite> {
    let mut r: Registry<dyn Suite> = Registry::new("suite");
    for s in base_suites() {
        r.register(s);
    }
    r.register(Box::new(AllSuite { parts: base_suites() }));
    r
}

pub fn run_suite(suite: &dyn Suite, ctx: &Context) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = suite.checks(ctx)?;
    Ok(SuiteReport {
        suite: suite.name().into(),
        g: ctx.config.g,
        n: ctx.config.n,
        seed: ctx.config.seed,
        checks,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Looks up `name` and runs it on `(g, n)`.
pub fn verify(name: &str, config: SuiteConfig) -> Result<SuiteReport> {
    let registry = suite_registry();
    let suite = registry.get(name)?;
    run_suite(suite, &Context::new(config)?)
}

