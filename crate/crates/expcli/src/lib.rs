//! Experiment runner: JSON scenario configs in, CSV tables and a manifest out.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{parse_config, resolve, ExperimentConfig, ExperimentTag, Grid, LoadedConfig, Overrides};
pub use experiments::{run_experiment, CsvArtifact, ExperimentOutput};
pub use report::{emit_report, Manifest};

/// Runs one experiment end to end and returns the manifest written next to the CSVs.
pub fn run_and_emit(cfg: &ExperimentConfig) -> anyhow::Result<Manifest> {
    let output = run_experiment(cfg)?;
    emit_report(cfg, &output, &cfg.out_dir)
}
