//! CSV tables and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};

use semiclassical_core::conventions::CONVENTIONS_VERSION;

use crate::config::ExperimentConfig;
use crate::experiments::{RunReport, Table};

pub const MANIFEST_NAME: &str = "manifest.json";

/// 12 significant digits.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.11e}")
    }
}

pub fn write_table(dir: &Path, table: &Table) -> Result<PathBuf> {
    let path = dir.join(format!("{}.csv", table.name));
    let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format_value(*v)))?;
    }
    w.flush()?;
    Ok(path)
}

pub fn manifest(cfg: &ExperimentConfig, report: &RunReport, files: &[String]) -> Result<Value> {
    Ok(json!({
        "conventions_version": CONVENTIONS_VERSION,
        "config": serde_json::to_value(cfg)?,
        "interpretation": cfg.interpretation,
        "oracle": report.oracle,
        "pairs": report.pairs,
        "warnings": report.warnings,
        "files": files,
    }))
}

/// Writes every table and the manifest into `dir`, creating it if needed.
pub fn write_report(dir: &Path, cfg: &ExperimentConfig, report: &RunReport) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut paths = Vec::new();
    for t in &report.tables {
        paths.push(write_table(dir, t)?);
    }
    let names: Vec<String> = report.tables.iter().map(|t| format!("{}.csv", t.name)).collect();
    let path = dir.join(MANIFEST_NAME);
    let text = serde_json::to_string_pretty(&manifest(cfg, report, &names)?)?;
    fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    paths.push(path);
    Ok(paths)
}
