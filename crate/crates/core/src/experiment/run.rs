//! `run` and `analyze`: one simulation to `trajectory.csv`, `analysis.json`
//! and `panels.csv`.

use std::fs;
use std::path::{Path, PathBuf};

use crate::analysis::{analyze, incidence_rates, AnalysisReport};
use crate::error::{Error, Result};
use crate::kernel::{window_stats, ModelParams};
use crate::policy::simulate;

use super::format::{format_real, panels_csv, parse_trajectory_csv, trajectory_csv, trajectory_from_rows};

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const ANALYSIS_FILE: &str = "analysis.json";
pub const PANELS_FILE: &str = "panels.csv";

/// File contents of one run, in the order they are written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunArtifacts {
    pub files: Vec<(&'static str, String)>,
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn render_run(params: &ModelParams, window_size: usize) -> Result<RunArtifacts> {
    let trajectory = simulate(params)?;
    let report = analyze(&trajectory, window_size)?;
    let incidence = incidence_rates(&trajectory, window_size)?;
    Ok(RunArtifacts {
        files: vec![
            (TRAJECTORY_FILE, trajectory_csv(&trajectory)),
            (ANALYSIS_FILE, to_json(&report)?),
            (PANELS_FILE, panels_csv(&trajectory, &incidence)),
        ],
    })
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub(crate) fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

/// Simulates `params` and writes the three output files into `out_dir`.
pub fn run_command(params: &ModelParams, window_size: usize, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let artifacts = render_run(params, window_size)?;
    create_dir(out_dir)?;
    artifacts
        .files
        .iter()
        .map(|(name, body)| {
            let path = out_dir.join(name);
            write_file(&path, body)?;
            Ok(path)
        })
        .collect()
}

/// Result of re-analysing a `trajectory.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeOutcome {
    pub report: AnalysisReport,
    /// Steps whose printed variety or complexity differs from a fresh kernel evaluation.
    pub mismatched_steps: Vec<u32>,
}

/// Re-runs the analysis on an existing trajectory file and re-derives its
/// kernel columns from `(n, l)` under `params`.
pub fn analyze_file(path: &Path, params: &ModelParams, window_size: usize) -> Result<AnalyzeOutcome> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let rows = parse_trajectory_csv(&text, path)?;
    let trajectory = trajectory_from_rows(&rows, *params)?;
    let mut mismatched_steps = Vec::new();
    for row in &rows {
        let stats = window_stats(row.step.state_after(), &trajectory.params)?;
        if format_real(stats.variety) != row.variety_text
            || format_real(stats.avg_complexity) != row.avg_complexity_text
        {
            mismatched_steps.push(row.step.t);
        }
    }
    Ok(AnalyzeOutcome {
        report: analyze(&trajectory, window_size)?,
        mismatched_steps,
    })
}

/// `analyze_file` plus writing `analysis.json` into `out_dir`.
pub fn analyze_command(
    path: &Path,
    params: &ModelParams,
    window_size: usize,
    out_dir: &Path,
) -> Result<(AnalyzeOutcome, PathBuf)> {
    let outcome = analyze_file(path, params, window_size)?;
    create_dir(out_dir)?;
    let dest = out_dir.join(ANALYSIS_FILE);
    write_file(&dest, &to_json(&outcome.report)?)?;
    Ok((outcome, dest))
}
