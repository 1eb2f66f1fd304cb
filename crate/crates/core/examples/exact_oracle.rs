//! Exact rational expectations next to the floating-point kernel.
//!
//! ```text
//! cargo run --example exact_oracle -- 3/8
//! ```

use capsim::oracle::{exact_expectation, RationalProb};
use capsim::{window_stats, ModelParams, State, WindowRadius};

fn main() -> capsim::Result<()> {
    let rho: RationalProb = std::env::args().nth(1).as_deref().unwrap_or("3/8").parse()?;
    let params = ModelParams::new(rho.to_f64(), WindowRadius::Bounded(4), 1, 0)?;
    for (n, l) in [(6, 6), (12, 7), (30, 20), (64, 40)] {
        let exact = exact_expectation(n, l, params.window_radius, &rho)?;
        let kernel = window_stats(State::new(n, l)?, &params)?;
        println!("n={n} l={l} r=4 rho={}", rho.as_ratio());
        println!("  avg complexity exact  {}", exact.avg_complexity);
        println!("  avg complexity kernel {:.17}", kernel.avg_complexity);
        println!(
            "  relative error {:.2e}",
            (kernel.avg_complexity - exact.avg_complexity_f64()).abs() / exact.avg_complexity_f64()
        );
    }
    Ok(())
}
