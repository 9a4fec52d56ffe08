//! Writes CSV artifacts and the JSON manifest describing them.

use crate::config::ExperimentConfig;
use crate::experiments::{ArtifactKind, ExperimentOutput};
use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnEntry {
    pub name: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileEntry {
    pub name: String,
    pub kind: ArtifactKind,
    pub rows: usize,
    pub sha256: String,
    pub columns: Vec<ColumnEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub tool: String,
    pub library_version: String,
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
    pub k: usize,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    pub files: Vec<FileEntry>,
}

impl Manifest {
    pub fn file_name(experiment: &str) -> String {
        format!("{experiment}_manifest.json")
    }
}

/// Writes every artifact into `dir` and a manifest naming each file with its checksum.
pub fn emit_report(cfg: &ExperimentConfig, output: &ExperimentOutput, dir: &Path) -> Result<Manifest> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
    let mut files = Vec::with_capacity(output.artifacts.len());
    for art in &output.artifacts {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(art.header())?;
        for row in &art.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().context("flushing CSV buffer")?;
        let path = dir.join(&art.name);
        std::fs::write(&path, &bytes).with_context(|| format!("writing {}", path.display()))?;
        files.push(FileEntry {
            name: art.name.clone(),
            kind: art.kind,
            rows: art.rows.len(),
            sha256: hex::encode(Sha256::digest(&bytes)),
            columns: art.columns.iter().map(|(n, d)| ColumnEntry { name: n.clone(), description: d.clone() }).collect(),
        });
    }
    let manifest = Manifest {
        tool: format!("tessfusion-cli {}", env!("CARGO_PKG_VERSION")),
        library_version: tessfusion::VERSION.to_string(),
        experiment: cfg.tag.name().to_string(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        k: cfg.k,
        warnings: cfg.warnings.clone(),
        notes: output.notes.clone(),
        files,
    };
    let path = dir.join(Manifest::file_name(cfg.tag.name()));
    let json = serde_json::to_string_pretty(&manifest)? + "\n";
    std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
    Ok(manifest)
}
