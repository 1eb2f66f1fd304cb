//! Without a competitiveness window and with `l = n`, variety is
//! `(1 + rho)^n` and average complexity is `rho n / (1 + rho)`.
//! Prints the kernel next to the closed forms.
//!
//! ```text
//! cargo run --example closed_forms -- 0.5
//! ```

use capsim::{closed_forms, window_stats, ModelParams, State, WindowRadius};

fn main() -> capsim::Result<()> {
    let rho: f64 = std::env::args().nth(1).map_or(Ok(0.5), |s| s.parse()).expect("rho must be a number");
    let params = ModelParams::new(rho, WindowRadius::Unbounded, 1, 0)?;

    println!("{:>6} {:>24} {:>24} {:>20}", "n", "variety", "(1+rho)^n", "avg_complexity");
    for n in [1u32, 2, 5, 10, 20, 50, 100, 500] {
        let stats = window_stats(State::new(n, n)?, &params)?;
        let cf = closed_forms(n, rho)?;
        println!(
            "{n:>6} {:>24.17e} {:>24.17e} {:>20.15}",
            stats.variety, cf.variety, stats.avg_complexity
        );
    }

    // Beyond f64 range the kernel still reports log-variety.
    let big = window_stats(State::new(100_000, 100_000)?, &params)?;
    println!(
        "n = 100000: ln variety {:.6} (n ln(1+rho) = {:.6}), avg complexity {:.6}",
        big.ln_variety,
        100_000.0 * (1.0 + rho).ln(),
        big.avg_complexity
    );
    Ok(())
}
