//! Draws random recipe books and compares the realised window counts with
//! the kernel's expectation.
//!
//! ```text
//! cargo run --release --example recipe_book_monte_carlo
//! ```

use capsim::oracle::{monte_carlo_estimate, realized_stats, sample_recipe_book};
use capsim::{window_stats, ModelParams, State, WindowRadius};

fn main() -> capsim::Result<()> {
    let (n, l, r, rho) = (14, 9, WindowRadius::Bounded(3), 0.5);

    let book = sample_recipe_book(n, rho, 1)?;
    let one = realized_stats(&book, l, r)?;
    println!("one book: {} viable recipes, {} in the window", book.len(), one.variety);

    let kernel = window_stats(State::new(n, l)?, &ModelParams::new(rho, r, 1, 0)?)?;
    let mc = monte_carlo_estimate(n, l, r, rho, 20_000, 42)?;
    let z = (mc.mean_variety - kernel.variety) / mc.se_variety;
    println!("variety: kernel {:.6}, sampled {:.6} +- {:.6} (z = {z:.2})", kernel.variety, mc.mean_variety, mc.se_variety);
    println!(
        "avg complexity: kernel {:.6}, sampled ratio {:.6}",
        kernel.avg_complexity, mc.ratio_avg_complexity
    );
    Ok(())
}
