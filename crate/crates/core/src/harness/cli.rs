//! Command line entry point.
//!
//! Exit codes: 0 when every asserted tolerance passes, 1 when one fails,
//! 2 for configuration and usage errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::Parser;

use super::config::{Command, Suite};
use super::{run_suite, write_outputs};
use crate::exec::{cap_threads, Exec};

pub const THREADS_ENV: &str = "MIRANDA_LAYERS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "miranda-layers", version, about = "Layer potential experiments and regularity scans")]
struct Args {
    /// Experiment group to run.
    #[arg(value_enum)]
    command: Command,
    /// JSON suite; the built-in suite is used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "miranda-out")]
    out: PathBuf,
    /// Overrides the seed of the suite.
    #[arg(long)]
    seed: Option<u64>,
    /// Runs every batch on the calling thread.
    #[arg(long)]
    sequential: bool,
}

fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("{THREADS_ENV} must be a positive integer, got {v:?}")),
        },
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("{THREADS_ENV}: {e}")),
    }
}

/// Parses `argv`, runs the selected experiments and writes the outputs.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match threads_from_env() {
        Ok(Some(n)) => cap_threads(n),
        Ok(None) => {}
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    }
    let mut suite = match &args.config {
        Some(path) => match Suite::load(path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        None => Suite::default_suite(0),
    };
    if let Some(seed) = args.seed {
        suite.seed = seed;
    }
    if suite.select(args.command).is_empty() {
        eprintln!("error: the config has no experiments for this command");
        return 2;
    }
    let exec = if args.sequential { Exec::Sequential } else { Exec::Parallel };
    let report = run_suite(&suite, args.command, exec);
    let files = match write_outputs(&report, &args.out) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    for exp in &report.experiments {
        for c in &exp.criteria {
            println!(
                "{} {}/{}: {:e} {} {:e}",
                if c.pass { "PASS" } else { "FAIL" },
                exp.name,
                c.id,
                c.value,
                c.comparison,
                c.threshold
            );
        }
        for w in &exp.warnings {
            println!("WARN {}: {w}", exp.name);
        }
    }
    println!("report: {}", files.report.display());
    if report.pass {
        0
    } else {
        1
    }
}
