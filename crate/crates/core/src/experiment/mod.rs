//! Configuration, output files and the command implementations behind the CLI.

pub mod config;
pub mod format;
pub mod oracle_check;
pub mod run;
pub mod sweep;

pub use config::{parse_config, resolve_oracle, resolve_run, resolve_sweep, ConfigLayer, OracleConfig, RunConfig};
pub use oracle_check::{oracle_check, oracle_check_command, OracleReport};
pub use run::{analyze_command, analyze_file, render_run, run_command, AnalyzeOutcome};
pub use sweep::{sweep_command, verify_manifest, RunManifest, SweepSpec};
