//! Greedy policy without a competitiveness window: the decision sequence,
//! its marginal gains and the resulting state.
//!
//! ```text
//! cargo run --example baseline_policy -- 0.5 40
//! ```

use capsim::{simulate, ModelParams, PolicyChoice, WindowRadius};

fn main() -> capsim::Result<()> {
    let mut args = std::env::args().skip(1);
    let rho: f64 = args.next().map_or(0.5, |s| s.parse().expect("rho must be a number"));
    let horizon: u32 = args.next().map_or(40, |s| s.parse().expect("horizon must be an integer"));
    let trajectory = simulate(&ModelParams::new(rho, WindowRadius::Unbounded, horizon, 0)?)?;

    println!("{:>4} {:>3} {:>5} {:>5} {:>12} {:>12}", "t", "", "n", "l", "gain V", "gain H");
    for step in &trajectory.steps {
        let h = step.gain_horizontal.map_or("-".to_string(), |g| format!("{g:.6}"));
        println!(
            "{:>4} {:>3} {:>5} {:>5} {:>12.6} {:>12}",
            step.t,
            step.choice.code(),
            step.n_after,
            step.l_after,
            step.gain_vertical,
            h
        );
    }
    let vertical = trajectory.choices().filter(|&c| c == PolicyChoice::Vertical).count();
    println!("{}", trajectory.choice_string());
    println!("vertical {vertical}, horizontal {}", trajectory.steps.len() - vertical);
    Ok(())
}
