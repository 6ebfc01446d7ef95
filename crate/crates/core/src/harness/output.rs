use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use super::{SuiteReport, Table};
use crate::{Error, Result};

/// Paths written by [`write_outputs`].
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFiles {
    pub report: PathBuf,
    pub timing: PathBuf,
    pub tables: Vec<PathBuf>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn write_table(path: &Path, table: &Table) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(&table.header).map_err(|e| io_err(path, e))?;
    for row in &table.rows {
        w.write_record(row).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Writes `report.json`, one CSV per experiment, extra tables under
/// `plotdata/` and wall-clock times in `timing.json`. Everything except
/// `timing.json` is a function of the config and the seed.
pub fn write_outputs(report: &SuiteReport, out_dir: &Path) -> Result<OutputFiles> {
    let plot = out_dir.join("plotdata");
    fs::create_dir_all(&plot).map_err(|e| io_err(&plot, e))?;
    let mut tables = Vec::new();
    for exp in &report.experiments {
        for (i, t) in exp.tables.iter().enumerate() {
            let path = if i == 0 {
                out_dir.join(format!("{}.csv", exp.name))
            } else {
                plot.join(format!("{}_{}.csv", exp.name, t.name))
            };
            write_table(&path, t)?;
            tables.push(path);
        }
    }
    let mut criteria = Table::new("criteria", &["experiment", "id", "value", "comparison", "threshold", "pass"]);
    for exp in &report.experiments {
        for c in &exp.criteria {
            criteria.push(vec![
                exp.name.clone(),
                c.id.clone(),
                super::num(c.value),
                c.comparison.clone(),
                super::num(c.threshold),
                c.pass.to_string(),
            ]);
        }
    }
    let cpath = out_dir.join("criteria.csv");
    write_table(&cpath, &criteria)?;
    tables.push(cpath);

    let rpath = out_dir.join("report.json");
    let text = serde_json::to_string_pretty(report).map_err(|e| io_err(&rpath, e))?;
    fs::write(&rpath, text + "\n").map_err(|e| io_err(&rpath, e))?;

    let tpath = out_dir.join("timing.json");
    let timing: serde_json::Map<String, serde_json::Value> =
        report.experiments.iter().map(|e| (e.name.clone(), json!(e.runtime_seconds))).collect();
    let text = serde_json::to_string_pretty(&json!({ "runtime_seconds": timing })).map_err(|e| io_err(&tpath, e))?;
    fs::write(&tpath, text + "\n").map_err(|e| io_err(&tpath, e))?;

    Ok(OutputFiles { report: rpath, timing: tpath, tables })
}
