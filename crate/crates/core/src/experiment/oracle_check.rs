//! `oracle`: kernel against the exact rational sums and, optionally, against
//! Monte-Carlo recipe books.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernel::{window_stats, ModelParams, State, WindowRadius};
use crate::oracle::{exact_expectation, monte_carlo_estimate, McEstimate, MAX_BOOK_N};

use super::config::OracleConfig;
use super::run::{create_dir, to_json, write_file};

pub const ORACLE_REPORT_FILE: &str = "oracle_report.json";
/// Kernel vs. exact rational, relative.
pub const EXACT_REL_TOL: f64 = 1e-10;
/// Kernel vs. Monte-Carlo mean, in standard errors.
pub const MC_SE_TOL: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantityCheck {
    pub kernel: f64,
    pub exact: f64,
    pub exact_rational: String,
    pub rel_err_exact: f64,
    pub monte_carlo: Option<f64>,
    /// |kernel - MC| in standard errors; only for variety.
    pub mc_z: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub n: u32,
    pub l: u32,
    pub r: WindowRadius,
    pub rho: String,
    pub replicates: u64,
    pub seed: u64,
    pub variety: QuantityCheck,
    pub avg_complexity: QuantityCheck,
    pub monte_carlo: Option<McEstimate>,
    pub pass: bool,
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Standard errors between the kernel value and the MC mean. A zero standard
/// error counts as agreement only for an exact match.
fn z_score(kernel: f64, est: &McEstimate) -> f64 {
    let diff = (kernel - est.mean_variety).abs();
    if est.se_variety > 0.0 {
        diff / est.se_variety
    } else if diff <= 1e-12 * kernel.abs() {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Computes the report without touching the filesystem.
pub fn oracle_check(cfg: &OracleConfig) -> Result<OracleReport> {
    let state = State::new(cfg.n, cfg.l)?;
    let params = ModelParams::new(cfg.rho.to_f64(), cfg.r, 1, cfg.seed)?;
    let stats = window_stats(state, &params)?;
    let exact = exact_expectation(cfg.n, cfg.l, cfg.r, &cfg.rho)?;
    let mc = if cfg.replicates > 0 {
        Some(monte_carlo_estimate(
            cfg.n,
            cfg.l,
            cfg.r,
            cfg.rho.to_f64(),
            cfg.replicates,
            cfg.seed,
        )?)
    } else {
        None
    };

    let exact_v = exact.variety_f64();
    let v_err = rel_err(stats.variety, exact_v);
    let mc_z = mc.as_ref().map(|est| z_score(stats.variety, est));
    let variety = QuantityCheck {
        kernel: stats.variety,
        exact: exact_v,
        exact_rational: exact.variety.to_string(),
        rel_err_exact: v_err,
        monte_carlo: mc.as_ref().map(|e| e.mean_variety),
        mc_z,
        pass: v_err <= EXACT_REL_TOL && mc_z.is_none_or(|z| z <= MC_SE_TOL),
    };

    let exact_c = exact.avg_complexity_f64();
    let c_err = rel_err(stats.avg_complexity, exact_c);
    let avg_complexity = QuantityCheck {
        kernel: stats.avg_complexity,
        exact: exact_c,
        exact_rational: exact.avg_complexity.to_string(),
        rel_err_exact: c_err,
        monte_carlo: mc.as_ref().map(|e| e.ratio_avg_complexity),
        mc_z: None,
        pass: c_err <= EXACT_REL_TOL,
    };

    let pass = variety.pass && avg_complexity.pass;
    Ok(OracleReport {
        n: cfg.n,
        l: cfg.l,
        r: cfg.r,
        rho: cfg.rho.to_string(),
        replicates: cfg.replicates,
        seed: cfg.seed,
        variety,
        avg_complexity,
        monte_carlo: mc,
        pass,
    })
}

/// Runs the checks and writes `oracle_report.json`. The sampling route is
/// refused above the enumeration bound before any work is done.
pub fn oracle_check_command(cfg: &OracleConfig) -> Result<(OracleReport, std::path::PathBuf)> {
    if cfg.replicates > 0 && cfg.n > MAX_BOOK_N {
        return Err(crate::error::Error::SizeLimit {
            what: "n",
            value: u64::from(cfg.n),
            max: u64::from(MAX_BOOK_N),
        });
    }
    let report = oracle_check(cfg)?;
    create_dir(&cfg.out)?;
    let path = cfg.out.join(ORACLE_REPORT_FILE);
    write_file(&path, &to_json(&report)?)?;
    Ok((report, path))
}
