//! Runs a small grid into a temporary directory and verifies the manifest.
//!
//! ```text
//! cargo run --example grid_sweep -- out/grid
//! ```

use std::path::PathBuf;

use capsim::analysis::DEFAULT_INCIDENCE_WINDOW;
use capsim::experiment::{sweep_command, verify_manifest, SweepSpec};
use capsim::WindowRadius;

fn main() -> capsim::Result<()> {
    let output_dir = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("capsim-grid"), PathBuf::from);
    let spec = SweepSpec {
        rho_values: vec![0.25, 0.5, 0.75],
        r_values: vec![WindowRadius::Unbounded, WindowRadius::Bounded(10), WindowRadius::Bounded(1)],
        horizon: 150,
        seed: 42,
        window_size: DEFAULT_INCIDENCE_WINDOW,
        output_dir,
    };
    let (manifest, path) = sweep_command(&spec)?;
    for cell in &manifest.cells {
        println!("{:<18} {}", cell.dir, cell.status);
    }
    let bad = verify_manifest(&manifest, &spec.output_dir);
    println!("manifest {} verified: {}", path.display(), bad.is_empty());
    Ok(())
}
