//! Combinatorial capabilities model of economic development.
//!
//! A country holds `n` capabilities and can coordinate products of at most
//! `l` of them. Every subset of `s` capabilities is a viable product with
//! probability `rho^s`, so expected variety and average complexity are
//! truncated binomial moments. With a competitiveness window of radius `r`
//! only products of length `[l - r, l]` are produced.
//!
//! Each period a policymaker either adds a capability (vertical policy) or
//! raises `l` (horizontal policy), whichever increases expected average
//! complexity more.
//!
//! * [`kernel`]: log-domain moments, variety, complexity, marginal gains.
//! * [`policy`]: the greedy decision rule and trajectory simulation.
//! * [`oracle`]: exact rational sums and sampled recipe books.
//! * [`analysis`]: hump detection, incidence, phases, acceleration.
//! * [`experiment`]: configuration, CSV/JSON output, sweeps.

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod kernel;
pub mod numeric;
pub mod oracle;
pub mod policy;

pub use error::{Error, Result};
pub use kernel::{
    avg_complexity, closed_forms, marginal_gains, truncated_moment, variety, window_stats,
    ComplexityWindow, MarginalGains, ModelParams, MomentOrder, Rho, State, WindowRadius,
};
pub use policy::{apply, decide, simulate, Decision, PolicyChoice, Trajectory, TrajectoryStep};
