//! Holding the coordination limit `l` fixed while adding capabilities:
//! average complexity rises but stays below `l`.
//!
//! ```text
//! cargo run --example coordination_limit
//! ```

use capsim::{avg_complexity, ModelParams, State, WindowRadius};

fn main() -> capsim::Result<()> {
    let l = 10;
    for rho in [0.25, 0.5, 0.75] {
        let params = ModelParams::new(rho, WindowRadius::Unbounded, 1, 0)?;
        print!("rho = {rho:<4}");
        for n in [10u32, 20, 50, 100, 1000, 10_000] {
            print!("  n={n}: {:.4}", avg_complexity(State::new(n, l)?, &params)?);
        }
        println!();
    }
    println!("ceiling l = {l}");
    Ok(())
}
