use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use semiclassical::config::{load_config, ExperimentKind};
use semiclassical::run_experiment;

#[derive(Parser)]
#[command(version, about = "Mean-field and exact runs for the maser model")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Mean-field trajectories of every pair member
    Trajectory(Common),
    /// Mean-field overlap and distances within each pair
    OverlapPair(Common),
    /// Second-order linear entropy, with the exact value when an oracle is set
    Entropy(Common),
    /// Largest Lyapunov exponent of each first member
    Lyapunov(Common),
    /// Mean field against exact evolution
    OracleCompare(Common),
    /// Overlap decay and Lyapunov exponents for the fig1 pairs
    Fig1(Common),
}

#[derive(Args)]
struct Common {
    /// JSON config; `fig1` may omit it to use the preset
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// `dotted.key=value`, applied after preset expansion
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    match try_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn try_main() -> Result<()> {
    let (kind, args) = match Cli::parse().verb {
        Verb::Trajectory(a) => (ExperimentKind::Trajectory, a),
        Verb::OverlapPair(a) => (ExperimentKind::OverlapPair, a),
        Verb::Entropy(a) => (ExperimentKind::Entropy, a),
        Verb::Lyapunov(a) => (ExperimentKind::Lyapunov, a),
        Verb::OracleCompare(a) => (ExperimentKind::OracleCompare, a),
        Verb::Fig1(a) => (ExperimentKind::Fig1, a),
    };
    let verb = serde_json::to_value(kind)?;
    let mut overrides = vec![format!("experiment={verb}")];
    overrides.extend(args.overrides);
    let cfg = match &args.config {
        Some(path) => load_config(path, &overrides)?,
        None if kind == ExperimentKind::Fig1 => {
            semiclassical::config::resolve(semiclassical::config::fig1_preset(), &overrides)?
        }
        None => anyhow::bail!("--config is required for this verb"),
    };
    let (report, files) = run_experiment(&cfg, &args.out).with_context(|| format!("running {verb}"))?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for f in files {
        println!("{}", f.display());
    }
    Ok(())
}
