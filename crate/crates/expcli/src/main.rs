use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use tessfusion_cli::{parse_config, resolve, run_and_emit, ExperimentConfig, ExperimentTag, Grid, Manifest, Overrides};

/// Distributed fusion experiments for tessarine signals under fading measurements.
#[derive(Parser)]
#[command(name = "tessfusion", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Master seed, overriding the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; defaults to $TESSFUSION_OUT_DIR, then ./tessfusion-out.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for Monte Carlo replicates.
    #[arg(long)]
    jobs: Option<usize>,
    /// Processing dimension; an improper choice falls back to the declared one with a warning.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSVs and manifest.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        experiment: ExperimentTag,
    },
    /// Check a configuration and report the scenario's properness.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Time the reduced and widely linear filters over a grid of horizons.
    Bench {
        #[command(flatten)]
        common: Common,
        /// Horizons as start:stop:step.
        #[arg(long)]
        n_grid: Option<Grid>,
    },
}

fn prepare(common: &Common, tag: ExperimentTag, n_grid: Option<Grid>) -> Result<ExperimentConfig> {
    let loaded = parse_config(&common.config)?;
    let ov = Overrides { seed: common.seed, out_dir: common.out.clone(), jobs: common.jobs, k: common.k, n_grid };
    let cfg = resolve(&loaded, tag, &ov)?;
    if let Some(j) = cfg.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("configuring the worker pool")?;
    }
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn report(cfg: &ExperimentConfig, manifest: &Manifest) {
    println!("{} written to {}", cfg.tag.name(), cfg.out_dir.display());
    for f in &manifest.files {
        println!("  {} ({} rows)", f.name, f.rows);
    }
    for n in &manifest.notes {
        println!("  note: {n}");
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { common, experiment } => {
            let cfg = prepare(&common, experiment, None)?;
            report(&cfg, &run_and_emit(&cfg)?);
        }
        Command::Bench { common, n_grid } => {
            let cfg = prepare(&common, ExperimentTag::Timing, n_grid)?;
            report(&cfg, &run_and_emit(&cfg)?);
        }
        Command::Validate { config } => {
            let loaded = parse_config(&config)?;
            let sc = &loaded.scenario;
            println!("{}: valid", config.display());
            println!("  label {:?}, declared k = {}, {} sensors, horizon {}", sc.label, sc.k, sc.sensor_count(), sc.horizon);
            println!("  T1-proper: {}", if loaded.properness.t1 { "yes" } else { "no" });
            println!("  T2-proper: {}", if loaded.properness.t2 { "yes" } else { "no" });
        }
    }
    Ok(())
}
