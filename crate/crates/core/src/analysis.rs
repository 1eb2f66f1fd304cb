//! Post-processing of trajectories: hump detection, policy incidence,
//! phase boundaries and complexity acceleration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{ModelParams, WindowRadius};
use crate::policy::{PolicyChoice, Trajectory};

/// Default moving-window length for vertical incidence.
pub const DEFAULT_INCIDENCE_WINDOW: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HumpReport {
    pub found: bool,
    /// 1-based step of the earliest global variety maximum.
    pub t_peak: u32,
    pub variety_peak: f64,
    pub variety_final: f64,
}

/// Inverted-U test on a variety series: the earliest global maximum must be
/// interior and the last value strictly below it.
pub fn detect_hump_series(variety: &[f64]) -> Result<HumpReport> {
    let Some(&last) = variety.last() else {
        return Err(Error::param("trajectory", "empty variety series"));
    };
    let mut peak_idx = 0;
    for (i, &v) in variety.iter().enumerate() {
        if v > variety[peak_idx] {
            peak_idx = i;
        }
    }
    let peak = variety[peak_idx];
    let interior = peak_idx > 0 && peak_idx + 1 < variety.len();
    Ok(HumpReport {
        found: interior && last < peak,
        t_peak: peak_idx as u32 + 1,
        variety_peak: peak,
        variety_final: last,
    })
}

pub fn detect_hump(trajectory: &Trajectory) -> Result<HumpReport> {
    detect_hump_series(&trajectory.variety_series())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidenceSeries {
    pub window_size: usize,
    /// Share of vertical choices among the last `window_size` steps (fewer at the start).
    pub vertical_fraction: Vec<f64>,
    pub cumulative_vertical: Vec<u32>,
}

impl IncidenceSeries {
    pub fn total_vertical(&self) -> u32 {
        self.cumulative_vertical.last().copied().unwrap_or(0)
    }

    pub fn total_horizontal(&self) -> u32 {
        self.cumulative_vertical.len() as u32 - self.total_vertical()
    }
}

pub fn incidence_from_choices(choices: &[PolicyChoice], window_size: usize) -> Result<IncidenceSeries> {
    if window_size == 0 {
        return Err(Error::param("window_size", "must be at least 1"));
    }
    let mut cumulative_vertical = Vec::with_capacity(choices.len());
    let mut vertical_fraction = Vec::with_capacity(choices.len());
    let mut total = 0u32;
    for (i, &c) in choices.iter().enumerate() {
        total += u32::from(c == PolicyChoice::Vertical);
        cumulative_vertical.push(total);
        let start = (i + 1).saturating_sub(window_size);
        let before = if start == 0 { 0 } else { cumulative_vertical[start - 1] };
        vertical_fraction.push(f64::from(total - before) / (i + 1 - start) as f64);
    }
    Ok(IncidenceSeries {
        window_size,
        vertical_fraction,
        cumulative_vertical,
    })
}

pub fn incidence_rates(trajectory: &Trajectory, window_size: usize) -> Result<IncidenceSeries> {
    let choices: Vec<PolicyChoice> = trajectory.choices().collect();
    incidence_from_choices(&choices, window_size)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseBoundaries {
    /// First step after which `l > r`: the country starts dropping its simplest products.
    pub t_window_binds: Option<u32>,
    /// First step (t >= 2) reaching `l = n`; with a bounded window, only once the window binds.
    pub t_frontier: Option<u32>,
}

pub fn classify_phases(trajectory: &Trajectory) -> PhaseBoundaries {
    let r = trajectory.params.window_radius;
    let binds = |l: u32| matches!(r, WindowRadius::Bounded(r) if l > r);
    let t_window_binds = trajectory
        .steps
        .iter()
        .find(|s| binds(s.l_after))
        .map(|s| s.t);
    let t_frontier = trajectory
        .steps
        .iter()
        .filter(|s| s.t >= 2 && s.n_after == s.l_after)
        .find(|s| r == WindowRadius::Unbounded || binds(s.l_after))
        .map(|s| s.t);
    PhaseBoundaries {
        t_window_binds,
        t_frontier,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Acceleration {
    pub pre_peak_mean_delta: f64,
    pub post_peak_mean_delta: f64,
}

/// Mean one-step change of `complexity` strictly before and strictly after
/// step `t_peak` (1-based). The change into the peak step is excluded; an
/// empty side averages to 0.
pub fn complexity_acceleration_series(complexity: &[f64], t_peak: usize) -> Acceleration {
    let mean = |range: std::ops::Range<usize>| {
        let deltas: Vec<f64> = range.map(|i| complexity[i] - complexity[i - 1]).collect();
        if deltas.is_empty() {
            0.0
        } else {
            deltas.iter().sum::<f64>() / deltas.len() as f64
        }
    };
    // Step t lives at index t - 1; its delta pairs index t - 1 with t - 2.
    let peak_idx = t_peak - 1;
    Acceleration {
        pre_peak_mean_delta: mean(1..peak_idx.max(1)),
        post_peak_mean_delta: mean(peak_idx + 1..complexity.len()),
    }
}

pub fn complexity_acceleration(trajectory: &Trajectory) -> Result<Acceleration> {
    let hump = detect_hump(trajectory)?;
    if !hump.found {
        return Err(Error::NoHump);
    }
    Ok(complexity_acceleration_series(
        &trajectory.complexity_series(),
        hump.t_peak as usize,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidenceSummary {
    pub window_size: usize,
    pub final_vertical_fraction: f64,
    pub cumulative_vertical: u32,
    pub cumulative_horizontal: u32,
    pub vertical_share: f64,
}

/// Everything `analysis.json` reports for one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub params: ModelParams,
    pub hump: HumpReport,
    pub phases: PhaseBoundaries,
    pub incidence: IncidenceSummary,
    pub acceleration: Option<Acceleration>,
    pub tie_steps: Vec<u32>,
    pub degenerate_steps: Vec<u32>,
}

pub fn analyze(trajectory: &Trajectory, window_size: usize) -> Result<AnalysisReport> {
    let hump = detect_hump(trajectory)?;
    let incidence = incidence_rates(trajectory, window_size)?;
    let acceleration = if hump.found {
        Some(complexity_acceleration_series(
            &trajectory.complexity_series(),
            hump.t_peak as usize,
        ))
    } else {
        None
    };
    let steps = trajectory.steps.len();
    Ok(AnalysisReport {
        params: trajectory.params,
        hump,
        phases: classify_phases(trajectory),
        incidence: IncidenceSummary {
            window_size,
            final_vertical_fraction: incidence.vertical_fraction.last().copied().unwrap_or(0.0),
            cumulative_vertical: incidence.total_vertical(),
            cumulative_horizontal: incidence.total_horizontal(),
            vertical_share: f64::from(incidence.total_vertical()) / steps as f64,
        },
        acceleration,
        tie_steps: trajectory.steps.iter().filter(|s| s.tie).map(|s| s.t).collect(),
        degenerate_steps: trajectory
            .steps
            .iter()
            .filter(|s| s.degenerate)
            .map(|s| s.t)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::State;
    use crate::policy::{simulate, TrajectoryStep};
    use PolicyChoice::{Horizontal as H, Vertical as V};

    #[test]
    fn hump_on_constructed_series() {
        let h = detect_hump_series(&[1.0, 3.0, 7.0, 12.0, 9.0, 4.0]).unwrap();
        assert!(h.found);
        assert_eq!(h.t_peak, 4);
        assert_eq!(h.variety_peak, 12.0);
        assert_eq!(h.variety_final, 4.0);
    }

    #[test]
    fn no_hump_at_boundaries() {
        assert!(!detect_hump_series(&[1.0, 2.0, 3.0, 4.0]).unwrap().found);
        assert!(!detect_hump_series(&[5.0, 2.0, 3.0, 4.0]).unwrap().found);
        assert!(!detect_hump_series(&[1.0]).unwrap().found);
        assert!(detect_hump_series(&[]).is_err());
    }

    #[test]
    fn plateau_peak_resolves_to_earliest() {
        let h = detect_hump_series(&[1.0, 5.0, 5.0, 2.0]).unwrap();
        assert!(h.found);
        assert_eq!(h.t_peak, 2);
        // Final value equal to the peak is not a hump.
        assert!(!detect_hump_series(&[1.0, 5.0, 3.0, 5.0]).unwrap().found);
    }

    #[test]
    fn incidence_examples() {
        let s = incidence_from_choices(&[V, H, V, V, H], 5).unwrap();
        assert_eq!(*s.vertical_fraction.last().unwrap(), 0.6);
        assert_eq!(s.cumulative_vertical, vec![1, 1, 2, 3, 3]);
        assert_eq!(s.total_horizontal(), 2);

        let s = incidence_from_choices(&[V, V, H, H, H, H, H, V], 2).unwrap();
        assert_eq!(&s.vertical_fraction[3..8], &[0.0, 0.0, 0.0, 0.0, 0.5]);
        assert!(incidence_from_choices(&[V], 0).is_err());
    }

    #[test]
    fn acceleration_on_flat_series_is_zero() {
        let a = complexity_acceleration_series(&[2.0; 8], 4);
        assert_eq!((a.pre_peak_mean_delta, a.post_peak_mean_delta), (0.0, 0.0));
        // deltas: 1,1,1 | (3) | 5,5
        let a = complexity_acceleration_series(&[0.0, 1.0, 2.0, 3.0, 6.0, 11.0, 16.0], 5);
        assert_eq!(a.pre_peak_mean_delta, 1.0);
        assert_eq!(a.post_peak_mean_delta, 5.0);
    }

    fn synthetic(variety: &[f64], complexity: &[f64]) -> Trajectory {
        let params = ModelParams::new(0.5, WindowRadius::Bounded(2), variety.len() as u32, 0).unwrap();
        let steps = variety
            .iter()
            .zip(complexity)
            .enumerate()
            .map(|(i, (&v, &c))| TrajectoryStep {
                t: i as u32 + 1,
                choice: V,
                n_after: i as u32 + 2,
                l_after: 1,
                s_min_after: 0,
                variety: v,
                avg_complexity: c,
                gain_vertical: 0.0,
                gain_horizontal: Some(0.0),
                tie: false,
                degenerate: false,
            })
            .collect();
        Trajectory {
            params,
            initial: State::INITIAL,
            steps,
        }
    }

    #[test]
    fn acceleration_requires_hump() {
        let t = synthetic(&[1.0, 2.0, 3.0], &[1.0; 3]);
        assert!(matches!(complexity_acceleration(&t), Err(Error::NoHump)));
        let t = synthetic(&[1.0, 4.0, 3.0, 2.0], &[1.5; 4]);
        let a = complexity_acceleration(&t).unwrap();
        assert_eq!((a.pre_peak_mean_delta, a.post_peak_mean_delta), (0.0, 0.0));
    }

    #[test]
    fn phases_for_unbounded_and_narrow_windows() {
        let t = simulate(&ModelParams::new(0.5, WindowRadius::Unbounded, 150, 42).unwrap()).unwrap();
        assert_eq!(classify_phases(&t).t_window_binds, None);

        let t = simulate(&ModelParams::new(0.5, WindowRadius::Bounded(1), 150, 42).unwrap()).unwrap();
        let phases = classify_phases(&t);
        let first_l2 = t.steps.iter().find(|s| s.l_after == 2).unwrap().t;
        assert_eq!(phases.t_window_binds, Some(first_l2));
        assert!(phases.t_frontier >= phases.t_window_binds);
    }
}
