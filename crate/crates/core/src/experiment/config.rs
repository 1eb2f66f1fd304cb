//! Layered configuration: command-line flags override a `key=value` file,
//! which overrides built-in defaults.

use std::path::PathBuf;

use crate::analysis::DEFAULT_INCIDENCE_WINDOW;
use crate::error::{Error, Result};
use crate::kernel::{ModelParams, Rho, WindowRadius};
use crate::oracle::RationalProb;

use super::sweep::SweepSpec;

pub const DEFAULT_REPLICATES: u64 = 20_000;
pub const DEFAULT_OUT: &str = "out";
/// Rows of the published figure grid.
pub const GRID_RHO: [f64; 3] = [0.25, 0.5, 0.75];
/// Columns of the published figure grid; `None` is the unbounded baseline.
pub const GRID_R: [Option<u32>; 5] = [None, Some(25), Some(20), Some(10), Some(1)];

/// One source of settings. Values stay textual until resolution so every
/// layer shares the same validation and error messages.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigLayer {
    pub rho: Option<String>,
    pub r: Option<String>,
    pub horizon: Option<String>,
    pub seed: Option<String>,
    pub replicates: Option<String>,
    pub window_size: Option<String>,
    pub out: Option<String>,
    pub n: Option<String>,
    pub l: Option<String>,
}

const KEYS: [&str; 9] = [
    "rho",
    "r",
    "horizon",
    "seed",
    "replicates",
    "window_size",
    "out",
    "n",
    "l",
];

impl ConfigLayer {
    fn slot(&mut self, key: &str) -> Option<&mut Option<String>> {
        Some(match key {
            "rho" => &mut self.rho,
            "r" => &mut self.r,
            "horizon" => &mut self.horizon,
            "seed" => &mut self.seed,
            "replicates" => &mut self.replicates,
            "window_size" | "window-size" => &mut self.window_size,
            "out" => &mut self.out,
            "n" => &mut self.n,
            "l" => &mut self.l,
            _ => return None,
        })
    }

    /// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut layer = ConfigLayer::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::param(
                    "config",
                    format!("line {}: expected key=value, got `{line}`", i + 1),
                ));
            };
            let key = key.trim();
            let slot = layer.slot(key).ok_or_else(|| {
                Error::param(
                    "config",
                    format!("line {}: unknown key `{key}` (known: {})", i + 1, KEYS.join(", ")),
                )
            })?;
            *slot = Some(value.trim().to_string());
        }
        Ok(layer)
    }

    /// `self` wins wherever it is set.
    pub fn over(self, lower: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            rho: self.rho.or(lower.rho),
            r: self.r.or(lower.r),
            horizon: self.horizon.or(lower.horizon),
            seed: self.seed.or(lower.seed),
            replicates: self.replicates.or(lower.replicates),
            window_size: self.window_size.or(lower.window_size),
            out: self.out.or(lower.out),
            n: self.n.or(lower.n),
            l: self.l.or(lower.l),
        }
    }
}

/// Merges flags over an optional config file body.
pub fn parse_config(flags: ConfigLayer, file: Option<&str>) -> Result<ConfigLayer> {
    let file = file.map(ConfigLayer::parse).transpose()?.unwrap_or_default();
    Ok(flags.over(file))
}

fn parse_num<T: std::str::FromStr>(key: &'static str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::param(key, format!("cannot parse `{value}`")))
}

fn parse_rho(value: &str) -> Result<f64> {
    Ok(Rho::new(parse_num("rho", value)?)?.get())
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Settings of `run` and `analyze`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub window_size: usize,
    pub out: PathBuf,
}

fn window_size(layer: &ConfigLayer) -> Result<usize> {
    let w = layer
        .window_size
        .as_deref()
        .map(|v| parse_num("window_size", v))
        .transpose()?
        .unwrap_or(DEFAULT_INCIDENCE_WINDOW);
    if w == 0 {
        return Err(Error::param("window_size", "must be at least 1"));
    }
    Ok(w)
}

fn horizon(layer: &ConfigLayer) -> Result<u32> {
    let h = layer
        .horizon
        .as_deref()
        .map(|v| parse_num("horizon", v))
        .transpose()?
        .unwrap_or(ModelParams::DEFAULT_HORIZON);
    if h == 0 {
        return Err(Error::param("horizon", "must be at least 1"));
    }
    Ok(h)
}

fn seed(layer: &ConfigLayer) -> Result<u64> {
    Ok(layer
        .seed
        .as_deref()
        .map(|v| parse_num("seed", v))
        .transpose()?
        .unwrap_or(ModelParams::DEFAULT_SEED))
}

fn out(layer: &ConfigLayer) -> PathBuf {
    PathBuf::from(layer.out.as_deref().unwrap_or(DEFAULT_OUT))
}

pub fn resolve_run(layer: &ConfigLayer) -> Result<RunConfig> {
    let rho = layer
        .rho
        .as_deref()
        .map(parse_rho)
        .transpose()?
        .unwrap_or(ModelParams::DEFAULT_RHO);
    let r = layer
        .r
        .as_deref()
        .map(str::parse::<WindowRadius>)
        .transpose()?
        .unwrap_or(WindowRadius::Unbounded);
    Ok(RunConfig {
        params: ModelParams::new(rho, r, horizon(layer)?, seed(layer)?)?,
        window_size: window_size(layer)?,
        out: out(layer),
    })
}

/// For sweeps `rho` and `r` take comma-separated lists; unset lists default
/// to the full figure grid.
pub fn resolve_sweep(layer: &ConfigLayer) -> Result<SweepSpec> {
    let rho_values = match layer.rho.as_deref() {
        Some(v) => list(v).map(parse_rho).collect::<Result<Vec<_>>>()?,
        None => GRID_RHO.to_vec(),
    };
    let r_values = match layer.r.as_deref() {
        Some(v) => list(v).map(str::parse).collect::<Result<Vec<_>>>()?,
        None => GRID_R
            .iter()
            .map(|r| r.map_or(WindowRadius::Unbounded, WindowRadius::Bounded))
            .collect(),
    };
    let spec = SweepSpec {
        rho_values,
        r_values,
        horizon: horizon(layer)?,
        seed: seed(layer)?,
        window_size: window_size(layer)?,
        output_dir: out(layer),
    };
    spec.validate()?;
    Ok(spec)
}

/// Settings of `oracle`. `replicates = 0` skips the Monte-Carlo route.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub n: u32,
    pub l: u32,
    pub r: WindowRadius,
    pub rho: RationalProb,
    pub replicates: u64,
    pub seed: u64,
    pub out: PathBuf,
}

pub fn resolve_oracle(layer: &ConfigLayer) -> Result<OracleConfig> {
    let n: u32 = parse_num(
        "n",
        layer
            .n
            .as_deref()
            .ok_or_else(|| Error::param("n", "required"))?,
    )?;
    let l: u32 = match layer.l.as_deref() {
        Some(v) => parse_num("l", v)?,
        None => n,
    };
    if l > n {
        return Err(Error::param("l", format!("l = {l} exceeds n = {n}")));
    }
    let rho = layer
        .rho
        .as_deref()
        .unwrap_or("0.5")
        .parse::<RationalProb>()?;
    Ok(OracleConfig {
        n,
        l,
        r: layer
            .r
            .as_deref()
            .map(str::parse)
            .transpose()?
            .unwrap_or(WindowRadius::Unbounded),
        rho,
        replicates: layer
            .replicates
            .as_deref()
            .map(|v| parse_num("replicates", v))
            .transpose()?
            .unwrap_or(DEFAULT_REPLICATES),
        seed: seed(layer)?,
        out: out(layer),
    })
}
