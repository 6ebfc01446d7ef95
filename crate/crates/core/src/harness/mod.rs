//! Experiment drivers, reports and the command line.

pub mod cli;
pub mod config;
mod identities;
mod kernel_suite;
mod output;
mod scan;
mod second;

pub use cli::cli_main;
pub use config::{Command, Experiment, ExperimentSpec, Suite};
pub use output::{write_outputs, OutputFiles};
pub use scan::{ScaleRecord, ScanResult};

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::exec::Exec;

/// One asserted tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Criterion {
    pub id: String,
    pub description: String,
    pub value: f64,
    pub threshold: f64,
    /// `"<"`, `"<="` or `">="`.
    pub comparison: String,
    pub pass: bool,
}

impl Criterion {
    pub fn below(id: &str, description: impl Into<String>, value: f64, threshold: f64) -> Self {
        Criterion {
            id: id.into(),
            description: description.into(),
            value,
            threshold,
            comparison: "<".into(),
            pass: value < threshold,
        }
    }

    pub fn at_least(id: &str, description: impl Into<String>, value: f64, threshold: f64) -> Self {
        Criterion {
            id: id.into(),
            description: description.into(),
            value,
            threshold,
            comparison: ">=".into(),
            pass: value >= threshold,
        }
    }

    /// A yes/no check recorded as `value = 1` (true) against `threshold = 1`.
    pub fn holds(id: &str, description: impl Into<String>, ok: bool) -> Self {
        Criterion {
            id: id.into(),
            description: description.into(),
            value: if ok { 1.0 } else { 0.0 },
            threshold: 1.0,
            comparison: ">=".into(),
            pass: ok,
        }
    }
}

/// Rows for one CSV file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Table { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Formats a float for CSV output with full round-trip precision.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub kind: String,
    pub pass: bool,
    pub criteria: Vec<Criterion>,
    pub warnings: Vec<String>,
    /// Experiment-specific results.
    pub summary: Value,
    /// The main table goes to `<name>.csv`, the rest to `plotdata/`.
    #[serde(skip)]
    pub tables: Vec<Table>,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

impl ExperimentReport {
    fn new(name: &str, kind: &str) -> Self {
        ExperimentReport {
            name: name.into(),
            kind: kind.into(),
            pass: true,
            criteria: Vec::new(),
            warnings: Vec::new(),
            summary: Value::Null,
            tables: Vec::new(),
            runtime_seconds: 0.0,
        }
    }

    fn check(&mut self, c: Criterion) {
        self.pass &= c.pass;
        self.criteria.push(c);
    }

    fn failed(name: &str, kind: &str, err: &crate::Error) -> Self {
        let mut r = ExperimentReport::new(name, kind);
        r.check(Criterion::holds("completed", format!("experiment ran to completion: {err}"), false));
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub seed: u64,
    pub config_hash: String,
    pub pass: bool,
    pub experiments: Vec<ExperimentReport>,
}

/// Per-experiment generator derived from the suite seed and the position.
pub(crate) fn experiment_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub(crate) struct Ctx {
    pub rng: ChaCha8Rng,
    pub exec: Exec,
}

/// Runs one experiment. Numerical errors are turned into a failed report.
pub fn run_experiment(exp: &Experiment, seed: u64, index: usize, exec: Exec) -> ExperimentReport {
    let start = Instant::now();
    let mut ctx = Ctx { rng: experiment_rng(seed, index), exec };
    let mut report = ExperimentReport::new(&exp.name, exp.spec.kind());
    let result = match &exp.spec {
        ExperimentSpec::Gauss(s) => identities::gauss(s, &mut ctx, &mut report),
        ExperimentSpec::LogPotential(s) => identities::log_potential(s, &mut ctx, &mut report),
        ExperimentSpec::Identities(s) => identities::run_identity_suite(s, &mut ctx, &mut report),
        ExperimentSpec::Exterior(s) => identities::exterior(s, &mut ctx, &mut report),
        ExperimentSpec::Tangential(s) => identities::tangential(s, &mut report),
        ExperimentSpec::PdeResidual(s) => identities::pde_residual_sweep(s, &mut ctx, &mut report),
        ExperimentSpec::Kernels(s) => kernel_suite::run_kernel_suite(s, &mut ctx, &mut report),
        ExperimentSpec::Remark21(s) => kernel_suite::remark21(s, &mut ctx, &mut report),
        ExperimentSpec::ModulusScan(s) => scan::run_modulus_scan(s, &mut ctx, &mut report),
        ExperimentSpec::SecondDerivative(s) => second::run_second_derivative_probe(s, &mut ctx, &mut report),
    };
    let mut report = match result {
        Ok(()) => report,
        Err(e) => ExperimentReport::failed(&exp.name, exp.spec.kind(), &e),
    };
    report.runtime_seconds = start.elapsed().as_secs_f64();
    report
}

/// Runs the experiments of `suite` selected by `command`, in order.
pub fn run_suite(suite: &Suite, command: Command, exec: Exec) -> SuiteReport {
    let experiments: Vec<ExperimentReport> = suite
        .experiments
        .iter()
        .enumerate()
        .filter(|(_, e)| command == Command::All || e.spec.command() == command)
        .map(|(i, e)| run_experiment(e, suite.seed, i, exec))
        .collect();
    SuiteReport {
        schema_version: config::SCHEMA_VERSION,
        seed: suite.seed,
        config_hash: config_hash(suite),
        pass: experiments.iter().all(|e| e.pass),
        experiments,
    }
}

/// SHA-256 of the canonical JSON form of the suite.
pub fn config_hash(suite: &Suite) -> String {
    use sha2::{Digest, Sha256};
    let bytes = serde_json::to_vec(suite).expect("suite serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}
