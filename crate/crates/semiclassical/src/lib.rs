//! Experiment runner for `semiclassical-core`: strict JSON configuration,
//! deterministic CSV tables and a run manifest per output directory.

pub mod config;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};

use anyhow::Result;

pub use config::{load_config, parse_config, ExperimentConfig, ExperimentKind};
pub use experiments::{run, PairSummary, RunReport, Table};

/// Runs `cfg` and writes its tables and manifest into `out_dir`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<(RunReport, Vec<PathBuf>)> {
    let report = run(cfg)?;
    let files = output::write_report(out_dir, cfg, &report)?;
    Ok((report, files))
}
