//! Parameter sweeps over `(rho, r)` with a digest manifest.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kernel::{ModelParams, Rho, WindowRadius};

use super::run::{create_dir, render_run, to_json, write_file};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub rho_values: Vec<f64>,
    pub r_values: Vec<WindowRadius>,
    pub horizon: u32,
    pub seed: u64,
    pub window_size: usize,
    /// Not recorded in the manifest so that manifests are relocatable.
    #[serde(skip)]
    pub output_dir: PathBuf,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rho_values.is_empty() {
            return Err(Error::param("rho", "sweep needs at least one value"));
        }
        if self.r_values.is_empty() {
            return Err(Error::param("r", "sweep needs at least one value"));
        }
        for &rho in &self.rho_values {
            Rho::new(rho)?;
        }
        for &r in &self.r_values {
            if r == WindowRadius::Bounded(0) {
                return Err(Error::param("r", "window radius must be at least 1"));
            }
        }
        if self.horizon == 0 {
            return Err(Error::param("horizon", "must be at least 1"));
        }
        if self.window_size == 0 {
            return Err(Error::param("window_size", "must be at least 1"));
        }
        Ok(())
    }

    /// Cells in row-major order: every `r` for the first `rho`, then the next.
    pub fn cells(&self) -> Vec<(f64, WindowRadius)> {
        self.rho_values
            .iter()
            .flat_map(|&rho| self.r_values.iter().map(move |&r| (rho, r)))
            .collect()
    }
}

pub fn cell_dir_name(rho: f64, r: WindowRadius) -> String {
    format!("rho{rho}_r{r}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub rho: f64,
    pub r: WindowRadius,
    pub dir: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub files: Vec<FileDigest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub spec: SweepSpec,
    pub cells: Vec<CellRecord>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn run_cell(spec: &SweepSpec, rho: f64, r: WindowRadius) -> CellRecord {
    let dir = cell_dir_name(rho, r);
    let outcome = (|| -> Result<Vec<FileDigest>> {
        let params = ModelParams::new(rho, r, spec.horizon, spec.seed)?;
        let artifacts = render_run(&params, spec.window_size)?;
        let cell_path = spec.output_dir.join(&dir);
        create_dir(&cell_path)?;
        artifacts
            .files
            .iter()
            .map(|(name, body)| {
                write_file(&cell_path.join(name), body)?;
                Ok(FileDigest {
                    name: (*name).to_string(),
                    sha256: sha256_hex(body.as_bytes()),
                })
            })
            .collect()
    })();
    match outcome {
        Ok(files) => CellRecord {
            rho,
            r,
            dir,
            status: "ok".into(),
            error: None,
            files,
        },
        Err(e) => CellRecord {
            rho,
            r,
            dir,
            status: "error".into(),
            error: Some(e.to_string()),
            files: Vec::new(),
        },
    }
}

/// Runs every cell (concurrently) and writes `manifest.json` last. A failing
/// cell is recorded in the manifest; the other cells still run.
pub fn sweep_command(spec: &SweepSpec) -> Result<(RunManifest, PathBuf)> {
    spec.validate()?;
    create_dir(&spec.output_dir)?;
    let cells: Vec<CellRecord> = spec
        .cells()
        .into_par_iter()
        .map(|(rho, r)| run_cell(spec, rho, r))
        .collect();
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        spec: spec.clone(),
        cells,
    };
    let path = spec.output_dir.join(MANIFEST_FILE);
    write_file(&path, &to_json(&manifest)?)?;
    Ok((manifest, path))
}

/// Files whose on-disk digest disagrees with the manifest (missing files included).
pub fn verify_manifest(manifest: &RunManifest, root: &Path) -> Vec<PathBuf> {
    manifest
        .cells
        .iter()
        .flat_map(|cell| {
            cell.files.iter().filter_map(move |f| {
                let path = root.join(&cell.dir).join(&f.name);
                match std::fs::read(&path) {
                    Ok(bytes) if sha256_hex(&bytes) == f.sha256 => None,
                    _ => Some(path),
                }
            })
        })
        .collect()
}
