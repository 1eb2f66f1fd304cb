//! Windowed dynamics: variety first rises, then falls while the policymaker
//! only raises `l`, and policy alternates once `l` reaches `n`.
//!
//! ```text
//! cargo run --example hump_panels -- 0.5 10 150
//! ```

use capsim::analysis::{analyze, incidence_rates, DEFAULT_INCIDENCE_WINDOW};
use capsim::experiment::format::panels_csv;
use capsim::{simulate, ModelParams, WindowRadius};

fn main() -> capsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let rho: f64 = args.next().map_or(0.5, |s| s.parse().expect("rho must be a number"));
    let r: WindowRadius = args
        .next()
        .map_or(WindowRadius::Bounded(10), |s| s.parse().expect("r must be an integer or inf"));
    let horizon: u32 = args.next().map_or(150, |s| s.parse().expect("horizon must be an integer"));

    let trajectory = simulate(&ModelParams::new(rho, r, horizon, 0)?)?;
    let report = analyze(&trajectory, DEFAULT_INCIDENCE_WINDOW)?;

    println!("hump found: {}", report.hump.found);
    if report.hump.found {
        println!("  peak at t = {} with variety {:.6e}", report.hump.t_peak, report.hump.variety_peak);
        println!("  final variety {:.6e}", report.hump.variety_final);
    }
    println!("window binds at {:?}, frontier at {:?}", report.phases.t_window_binds, report.phases.t_frontier);
    if let Some(a) = report.acceleration {
        println!(
            "mean complexity step: {:.4} before the peak, {:.4} after",
            a.pre_peak_mean_delta, a.post_peak_mean_delta
        );
    }
    println!("{}", trajectory.choice_string());

    // Every tenth row of the panel table.
    let incidence = incidence_rates(&trajectory, DEFAULT_INCIDENCE_WINDOW)?;
    for (i, line) in panels_csv(&trajectory, &incidence).lines().enumerate() {
        if i % 10 == 0 {
            println!("{line}");
        }
    }
    Ok(())
}
