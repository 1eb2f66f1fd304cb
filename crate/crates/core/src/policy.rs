//! Greedy policymaker: at every step pick whichever unit increase (`n` or `l`)
//! raises expected average complexity the most.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{marginal_gains, window_stats, MarginalGains, ModelParams, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolicyChoice {
    /// Acquire one new capability (`n + 1`).
    Vertical,
    /// Raise the maximum coordinated product length (`l + 1`).
    Horizontal,
}

impl PolicyChoice {
    pub fn code(self) -> char {
        match self {
            PolicyChoice::Vertical => 'V',
            PolicyChoice::Horizontal => 'H',
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "V" => Some(PolicyChoice::Vertical),
            "H" => Some(PolicyChoice::Horizontal),
            _ => None,
        }
    }
}

impl fmt::Display for PolicyChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision {
    pub choice: PolicyChoice,
    pub gains: MarginalGains,
    /// Both gains were exactly equal; resolved to `Vertical`.
    pub tie: bool,
    /// No available option had a positive gain.
    pub degenerate: bool,
}

pub fn decide(state: State, params: &ModelParams) -> Result<Decision> {
    let gains = marginal_gains(state, params)?;
    let (choice, tie) = match gains.gain_horizontal {
        None => (PolicyChoice::Vertical, false),
        Some(h) if h > gains.gain_vertical => (PolicyChoice::Horizontal, false),
        Some(h) => (PolicyChoice::Vertical, h == gains.gain_vertical),
    };
    let best = gains
        .gain_horizontal
        .map_or(gains.gain_vertical, |h| h.max(gains.gain_vertical));
    Ok(Decision {
        choice,
        gains,
        tie,
        degenerate: best <= 0.0,
    })
}

pub fn apply(state: State, choice: PolicyChoice) -> Result<State> {
    state.validate()?;
    match choice {
        PolicyChoice::Vertical => Ok(State {
            n: state.n + 1,
            l: state.l,
        }),
        PolicyChoice::Horizontal if state.at_frontier() => Err(Error::Constraint(format!(
            "horizontal policy at {state} would exceed l <= n"
        ))),
        PolicyChoice::Horizontal => Ok(State {
            n: state.n,
            l: state.l + 1,
        }),
    }
}

/// One simulated period. Gains are those seen at decision time (pre-step);
/// `variety` and `avg_complexity` belong to the post-step state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep {
    /// 1-based.
    pub t: u32,
    pub choice: PolicyChoice,
    pub n_after: u32,
    pub l_after: u32,
    pub s_min_after: u32,
    pub variety: f64,
    pub avg_complexity: f64,
    pub gain_vertical: f64,
    pub gain_horizontal: Option<f64>,
    pub tie: bool,
    pub degenerate: bool,
}

impl TrajectoryStep {
    pub fn state_after(&self) -> State {
        State {
            n: self.n_after,
            l: self.l_after,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: ModelParams,
    pub initial: State,
    pub steps: Vec<TrajectoryStep>,
}

impl Trajectory {
    /// State before step `t` (1-based); `t = len + 1` gives the final state.
    pub fn state_before(&self, t: usize) -> State {
        if t <= 1 {
            self.initial
        } else {
            self.steps[t - 2].state_after()
        }
    }

    pub fn choices(&self) -> impl Iterator<Item = PolicyChoice> + '_ {
        self.steps.iter().map(|s| s.choice)
    }

    pub fn variety_series(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.variety).collect()
    }

    pub fn complexity_series(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.avg_complexity).collect()
    }

    pub fn choice_string(&self) -> String {
        self.choices().map(PolicyChoice::code).collect()
    }

    /// Checks step numbering and that every step moves exactly one of `n`, `l` by one.
    pub fn check_consistency(&self) -> Result<()> {
        let mut state = self.initial;
        for (i, step) in self.steps.iter().enumerate() {
            if step.t as usize != i + 1 {
                return Err(Error::Constraint(format!(
                    "step {} recorded with index {}",
                    i + 1,
                    step.t
                )));
            }
            let expected = apply(state, step.choice)?;
            if expected != step.state_after() {
                return Err(Error::Constraint(format!(
                    "step {}: {} after {} from {state}, recorded {}",
                    step.t,
                    expected,
                    step.choice,
                    step.state_after()
                )));
            }
            state = expected;
        }
        Ok(())
    }
}

/// Runs `params.horizon` greedy steps from `State::INITIAL`.
pub fn simulate(params: &ModelParams) -> Result<Trajectory> {
    simulate_from(State::INITIAL, params)
}

pub fn simulate_from(initial: State, params: &ModelParams) -> Result<Trajectory> {
    params.validate()?;
    initial.validate()?;
    let mut state = initial;
    let mut steps = Vec::with_capacity(params.horizon as usize);
    for t in 1..=params.horizon {
        let decision = decide(state, params)?;
        state = apply(state, decision.choice)?;
        let stats = window_stats(state, params)?;
        steps.push(TrajectoryStep {
            t,
            choice: decision.choice,
            n_after: state.n,
            l_after: state.l,
            s_min_after: stats.window.s_min,
            variety: stats.variety,
            avg_complexity: stats.avg_complexity,
            gain_vertical: decision.gains.gain_vertical,
            gain_horizontal: decision.gains.gain_horizontal,
            tie: decision.tie,
            degenerate: decision.degenerate,
        });
    }
    Ok(Trajectory {
        params: *params,
        initial,
        steps,
    })
}
