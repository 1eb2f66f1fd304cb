//! CSV layouts for trajectories and panels.
//!
//! Reals are written with 17 significant digits, which round-trips every
//! finite `f64`. Lines end in `\n`; there is no quoting since no field can
//! contain a comma.

use std::path::Path;

use crate::analysis::IncidenceSeries;
use crate::error::{Error, Result};
use crate::kernel::{ModelParams, State};
use crate::policy::{apply, PolicyChoice, Trajectory, TrajectoryStep};

pub const TRAJECTORY_HEADER: &str =
    "step,policy,n,l,s_min,variety,avg_complexity,gain_vertical,gain_horizontal";
pub const PANELS_HEADER: &str = "step,n,l,variety,avg_complexity,vertical_fraction,cumulative_vertical";

/// Token for an unavailable horizontal gain.
pub const NA: &str = "NA";

/// `%.17g`-style rendering: fixed notation for decimal exponents in `[-5, 17)`,
/// scientific otherwise. Trailing zeros are kept so every value shows 17 digits.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("scientific formatting always carries an exponent");
    if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        sci
    }
}

pub fn parse_real(field: &str) -> Option<f64> {
    match field {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        _ => field.parse().ok(),
    }
}

pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::with_capacity(64 * (trajectory.steps.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &trajectory.steps {
        let gain_h = s.gain_horizontal.map_or_else(|| NA.to_string(), format_real);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            s.t,
            s.choice.code(),
            s.n_after,
            s.l_after,
            s.s_min_after,
            format_real(s.variety),
            format_real(s.avg_complexity),
            format_real(s.gain_vertical),
            gain_h,
        ));
    }
    out
}

pub fn panels_csv(trajectory: &Trajectory, incidence: &IncidenceSeries) -> String {
    let mut out = String::new();
    out.push_str(PANELS_HEADER);
    out.push('\n');
    for (i, s) in trajectory.steps.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            s.t,
            s.n_after,
            s.l_after,
            format_real(s.variety),
            format_real(s.avg_complexity),
            format_real(incidence.vertical_fraction[i]),
            incidence.cumulative_vertical[i],
        ));
    }
    out
}

/// One parsed row of `trajectory.csv`, with the original text of each real.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub step: TrajectoryStep,
    pub variety_text: String,
    pub avg_complexity_text: String,
}

pub fn parse_trajectory_csv(text: &str, path: &Path) -> Result<Vec<TrajectoryRow>> {
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == TRAJECTORY_HEADER => {}
        Some((_, header)) => return Err(err(1, format!("unexpected header `{header}`"))),
        None => return Err(err(1, "empty file".into())),
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 9 {
            return Err(err(line_no, format!("expected 9 fields, found {}", fields.len())));
        }
        let int = |i: usize, name: &str| -> Result<u32> {
            fields[i]
                .parse()
                .map_err(|_| err(line_no, format!("bad {name} `{}`", fields[i])))
        };
        let real = |i: usize, name: &str| -> Result<f64> {
            parse_real(fields[i]).ok_or_else(|| err(line_no, format!("bad {name} `{}`", fields[i])))
        };
        let choice = PolicyChoice::from_code(fields[1])
            .ok_or_else(|| err(line_no, format!("bad policy `{}`", fields[1])))?;
        let gain_horizontal = if fields[8] == NA {
            None
        } else {
            Some(real(8, "gain_horizontal")?)
        };
        rows.push(TrajectoryRow {
            step: TrajectoryStep {
                t: int(0, "step")?,
                choice,
                n_after: int(2, "n")?,
                l_after: int(3, "l")?,
                s_min_after: int(4, "s_min")?,
                variety: real(5, "variety")?,
                avg_complexity: real(6, "avg_complexity")?,
                gain_vertical: real(7, "gain_vertical")?,
                gain_horizontal,
                tie: false,
                degenerate: false,
            },
            variety_text: fields[5].to_string(),
            avg_complexity_text: fields[6].to_string(),
        });
    }
    Ok(rows)
}

/// Rebuilds a trajectory from parsed rows. The initial state is inferred by
/// undoing the first step. Tie and degeneracy flags are re-derived from the
/// recorded gains.
pub fn trajectory_from_rows(rows: &[TrajectoryRow], params: ModelParams) -> Result<Trajectory> {
    let Some(first) = rows.first() else {
        return Err(Error::param("trajectory", "no rows"));
    };
    let after = first.step.state_after();
    let initial = match first.step.choice {
        PolicyChoice::Vertical => State::new(after.n.saturating_sub(1), after.l),
        PolicyChoice::Horizontal => State::new(after.n, after.l.saturating_sub(1)),
    }?;
    if apply(initial, first.step.choice)? != after {
        return Err(Error::Constraint("first row is not reachable by one step".into()));
    }
    let steps = rows
        .iter()
        .map(|r| {
            let mut s = r.step;
            s.tie = s.gain_horizontal == Some(s.gain_vertical);
            let best = s.gain_horizontal.map_or(s.gain_vertical, |h| h.max(s.gain_vertical));
            s.degenerate = best <= 0.0;
            s
        })
        .collect();
    let trajectory = Trajectory {
        params: ModelParams {
            horizon: rows.len() as u32,
            ..params
        },
        initial,
        steps,
    };
    trajectory.check_consistency()?;
    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::WindowRadius;
    use crate::policy::simulate;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_real(57.6650390625), "57.665039062500000");
        assert_eq!(format_real(0.1), "0.10000000000000001");
        assert_eq!(format_real(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_real(0.0), "0.0000000000000000");
        assert_eq!(format_real(1e20), "1.0000000000000000e20");
        assert_eq!(format_real(1.5e-7), "1.4999999999999999e-7");
        assert_eq!(format_real(-2.5), "-2.5000000000000000");
        assert_eq!(format_real(f64::INFINITY), "inf");
    }

    #[test]
    fn rows_round_trip_through_text() {
        let p = ModelParams::new(0.75, WindowRadius::Bounded(4), 60, 1).unwrap();
        let t = simulate(&p).unwrap();
        let text = trajectory_csv(&t);
        assert!(text.ends_with('\n') && !text.contains('\r'));
        let rows = parse_trajectory_csv(&text, Path::new("mem")).unwrap();
        let back = trajectory_from_rows(&rows, p).unwrap();
        assert_eq!(back, t);
        assert_eq!(trajectory_csv(&back), text);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        let p = Path::new("x.csv");
        assert!(parse_trajectory_csv("a,b\n", p).is_err());
        let bad = format!("{TRAJECTORY_HEADER}\n1,X,2,1,0,1,1,1,NA\n");
        assert!(matches!(
            parse_trajectory_csv(&bad, p),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
