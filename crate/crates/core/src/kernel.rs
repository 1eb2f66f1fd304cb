//! Expected variety, average complexity and policy marginal gains.
//!
//! Every expectation in the model is a truncated weighted binomial moment
//!
//! ```text
//! M_k(n; lo, hi) = sum_{s=lo}^{hi} s^k * C(n, s) * rho^s      k in {0, 1}
//! ```
//!
//! evaluated in the log domain: each summand's logarithm is formed from the
//! log-factorial table, the largest one is factored out, and the remaining
//! ratios are exponentiated and accumulated with compensation. Average
//! complexity is the ratio `M_1 / M_0` of the shifted sums and never touches
//! the (possibly huge) common scale.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{ln_binomial_dd, CompensatedSum, Dd, MAX_TABLE_N};

/// Probability that a single capability takes part in a viable product; `0 < rho <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Rho(f64);

impl Rho {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value <= 1.0 {
            Ok(Rho(value))
        } else {
            Err(Error::param("rho", format!("{value} is outside (0, 1]")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl<'de> Deserialize<'de> for Rho {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = f64::deserialize(deserializer)?;
        Rho::new(value).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Competitiveness window radius `r`: products are produced only with
/// complexity in `[l - r, l]`. `Unbounded` is the model without product exit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowRadius {
    Bounded(u32),
    Unbounded,
}

impl WindowRadius {
    pub fn bounded(r: u32) -> Result<Self> {
        if r == 0 {
            Err(Error::param("r", "window radius must be at least 1"))
        } else {
            Ok(WindowRadius::Bounded(r))
        }
    }

    /// Lowest producible complexity when the maximum is `l`.
    pub fn floor_for(self, l: u32) -> u32 {
        match self {
            WindowRadius::Bounded(r) => l.saturating_sub(r),
            WindowRadius::Unbounded => 0,
        }
    }

    pub fn as_option(self) -> Option<u32> {
        match self {
            WindowRadius::Bounded(r) => Some(r),
            WindowRadius::Unbounded => None,
        }
    }
}

impl fmt::Display for WindowRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowRadius::Bounded(r) => write!(f, "{r}"),
            WindowRadius::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for WindowRadius {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") {
            return Ok(WindowRadius::Unbounded);
        }
        let r: u32 = s
            .parse()
            .map_err(|_| Error::param("r", format!("expected a positive integer or `inf`, got `{s}`")))?;
        WindowRadius::bounded(r)
    }
}

impl Serialize for WindowRadius {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            WindowRadius::Bounded(r) => serializer.serialize_u32(*r),
            WindowRadius::Unbounded => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for WindowRadius {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u32),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(r) => WindowRadius::bounded(r),
            Raw::Text(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Full configuration of one simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub rho: Rho,
    pub window_radius: WindowRadius,
    /// Number of policy steps.
    pub horizon: u32,
    /// Only consumed by the Monte-Carlo oracle.
    pub seed: u64,
}

impl ModelParams {
    pub const DEFAULT_RHO: f64 = 0.5;
    pub const DEFAULT_HORIZON: u32 = 150;
    pub const DEFAULT_SEED: u64 = 42;

    pub fn new(rho: f64, window_radius: WindowRadius, horizon: u32, seed: u64) -> Result<Self> {
        let params = ModelParams {
            rho: Rho::new(rho)?,
            window_radius,
            horizon,
            seed,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        Rho::new(self.rho.get())?;
        if let WindowRadius::Bounded(0) = self.window_radius {
            return Err(Error::param("r", "window radius must be at least 1"));
        }
        if self.horizon == 0 {
            return Err(Error::param("horizon", "must be at least 1"));
        }
        Ok(())
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            rho: Rho(Self::DEFAULT_RHO),
            window_radius: WindowRadius::Unbounded,
            horizon: Self::DEFAULT_HORIZON,
            seed: Self::DEFAULT_SEED,
        }
    }
}

/// Number of capabilities `n` and maximum producible product length `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct State {
    pub n: u32,
    pub l: u32,
}

impl State {
    pub const INITIAL: State = State { n: 1, l: 1 };

    pub fn new(n: u32, l: u32) -> Result<Self> {
        let state = State { n, l };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l > self.n {
            return Err(Error::param(
                "l",
                format!("l = {} exceeds n = {}", self.l, self.n),
            ));
        }
        if self.n >= MAX_TABLE_N {
            return Err(Error::SizeLimit {
                what: "n",
                value: u64::from(self.n),
                max: u64::from(MAX_TABLE_N - 1),
            });
        }
        Ok(())
    }

    /// `l == n`: only the most complex feasible products remain to be unlocked.
    pub fn at_frontier(&self) -> bool {
        self.l == self.n
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, l={})", self.n, self.l)
    }
}

/// Range of product complexities a country actually produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityWindow {
    pub s_min: u32,
    pub s_max: u32,
}

impl ComplexityWindow {
    pub fn new(state: State, radius: WindowRadius) -> Self {
        ComplexityWindow {
            s_min: radius.floor_for(state.l),
            s_max: state.l,
        }
    }
}

/// Order of a truncated moment: `Count` sums `C(n,s) rho^s`, `Length` sums `s C(n,s) rho^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentOrder {
    Count,
    Length,
}

/// Both moments of one window, relative to the common factor `exp(ln_scale)`.
#[derive(Debug, Clone, Copy)]
struct ShiftedMoments {
    ln_scale: Dd,
    count: f64,
    length: f64,
    lo: u32,
    hi: u32,
}

impl ShiftedMoments {
    fn ln_count(&self) -> f64 {
        self.ln_scale.hi + (self.ln_scale.lo + self.count.ln())
    }

    fn value(&self, order: MomentOrder) -> f64 {
        let shifted = match order {
            MomentOrder::Count => self.count,
            MomentOrder::Length => self.length,
        };
        self.ln_scale.exp() * shifted
    }

    fn mean(&self) -> f64 {
        (self.length / self.count).clamp(f64::from(self.lo), f64::from(self.hi))
    }
}

fn shifted_moments(n: u32, lo: u32, hi: u32, rho: f64) -> Result<Option<ShiftedMoments>> {
    Rho::new(rho)?;
    if n >= MAX_TABLE_N {
        return Err(Error::SizeLimit {
            what: "n",
            value: u64::from(n),
            max: u64::from(MAX_TABLE_N - 1),
        });
    }
    if hi > n {
        return Err(Error::param("s_hi", format!("{hi} exceeds n = {n}")));
    }
    if lo > hi {
        return Ok(None);
    }
    let ln_rho = rho.ln();
    let ln_term = |s: u32| ln_binomial_dd(n, s).add(Dd::from_product(f64::from(s), ln_rho));

    let mut ln_scale = ln_term(lo);
    for s in lo + 1..=hi {
        let t = ln_term(s);
        if t.to_f64() > ln_scale.to_f64() {
            ln_scale = t;
        }
    }

    let mut count = CompensatedSum::default();
    let mut length = CompensatedSum::default();
    for s in lo..=hi {
        let w = ln_term(s).sub(ln_scale).to_f64().exp();
        count.add(w);
        length.add(f64::from(s) * w);
    }
    Ok(Some(ShiftedMoments {
        ln_scale,
        count: count.value(),
        length: length.value(),
        lo,
        hi,
    }))
}

/// `sum_{s=s_lo}^{s_hi} s^k C(n,s) rho^s`; zero for an empty range.
///
/// The result overflows to `+inf` once it exceeds `f64::MAX`; use
/// [`ln_truncated_moment`] for very large `n`.
pub fn truncated_moment(n: u32, s_lo: u32, s_hi: u32, rho: f64, order: MomentOrder) -> Result<f64> {
    Ok(shifted_moments(n, s_lo, s_hi, rho)?.map_or(0.0, |m| m.value(order)))
}

/// Natural logarithm of [`truncated_moment`]; `-inf` for an empty range.
pub fn ln_truncated_moment(n: u32, s_lo: u32, s_hi: u32, rho: f64, order: MomentOrder) -> Result<f64> {
    let Some(m) = shifted_moments(n, s_lo, s_hi, rho)? else {
        return Ok(f64::NEG_INFINITY);
    };
    Ok(match order {
        MomentOrder::Count => m.ln_count(),
        // s = 0 contributes nothing to the length moment.
        MomentOrder::Length if m.length == 0.0 => f64::NEG_INFINITY,
        MomentOrder::Length => m.ln_scale.hi + (m.ln_scale.lo + m.length.ln()),
    })
}

/// Kernel statistics of one state under one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowStats {
    pub window: ComplexityWindow,
    pub variety: f64,
    pub ln_variety: f64,
    pub avg_complexity: f64,
}

fn state_moments(state: State, params: &ModelParams) -> Result<(ComplexityWindow, ShiftedMoments)> {
    state.validate()?;
    params.validate()?;
    let window = ComplexityWindow::new(state, params.window_radius);
    let m = shifted_moments(state.n, window.s_min, window.s_max, params.rho.get())?
        .expect("window is non-empty since s_min <= l");
    Ok((window, m))
}

pub fn window_stats(state: State, params: &ModelParams) -> Result<WindowStats> {
    let (window, m) = state_moments(state, params)?;
    Ok(WindowStats {
        window,
        variety: m.value(MomentOrder::Count),
        ln_variety: m.ln_count(),
        avg_complexity: m.mean(),
    })
}

/// Expected number of produced products, `d(n, l)` over the active window.
pub fn variety(state: State, params: &ModelParams) -> Result<f64> {
    let (_, m) = state_moments(state, params)?;
    Ok(m.value(MomentOrder::Count))
}

/// Expected average product length over the active window.
pub fn avg_complexity(state: State, params: &ModelParams) -> Result<f64> {
    let (_, m) = state_moments(state, params)?;
    Ok(m.mean())
}

/// Change in average complexity from one more capability (vertical) or
/// one more unit of coordination ability (horizontal).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalGains {
    pub gain_vertical: f64,
    /// `None` at the frontier `l == n`, where `l` cannot grow.
    pub gain_horizontal: Option<f64>,
}

pub fn marginal_gains(state: State, params: &ModelParams) -> Result<MarginalGains> {
    let here = avg_complexity(state, params)?;
    let wider = avg_complexity(
        State {
            n: state.n + 1,
            l: state.l,
        },
        params,
    )?;
    let gain_horizontal = if state.at_frontier() {
        None
    } else {
        let deeper = avg_complexity(
            State {
                n: state.n,
                l: state.l + 1,
            },
            params,
        )?;
        Some(deeper - here)
    };
    Ok(MarginalGains {
        gain_vertical: wider - here,
        gain_horizontal,
    })
}

/// Closed-form variety and average complexity with no coordination limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForms {
    pub variety: f64,
    pub avg_complexity: f64,
}

/// `((1 + rho)^n, rho n / (1 + rho))`.
pub fn closed_forms(n: u32, rho: f64) -> Result<ClosedForms> {
    Rho::new(rho)?;
    let n = f64::from(n);
    Ok(ClosedForms {
        variety: (1.0 + rho).powf(n),
        avg_complexity: rho * n / (1.0 + rho),
    })
}
