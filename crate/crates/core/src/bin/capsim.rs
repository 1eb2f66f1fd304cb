use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use capsim::experiment::{
    analyze_command, oracle_check_command, parse_config, resolve_oracle, resolve_run, resolve_sweep,
    run_command, sweep_command, ConfigLayer,
};
use capsim::Error;

#[derive(Parser)]
#[command(name = "capsim", version, about = "Vertical vs. horizontal policy in a combinatorial capabilities model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one parameter set and write trajectory.csv, analysis.json and panels.csv.
    Run(Common),
    /// Run every (rho, r) cell; `--rho` and `--r` take comma-separated lists.
    Sweep(Common),
    /// Check the kernel against exact rationals and sampled recipe books (`--replicates 0`: exact only).
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        l: Option<String>,
    },
    /// Re-analyse an existing trajectory.csv.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Trajectory to read.
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    rho: Option<String>,
    /// Window radius, or `inf`.
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    horizon: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    replicates: Option<String>,
    #[arg(long = "window-size")]
    window_size: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// key=value settings file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn layer(self, n: Option<String>, l: Option<String>) -> Result<ConfigLayer, Error> {
        let file = self
            .config
            .as_ref()
            .map(|p| fs::read_to_string(p).map_err(|e| Error::Io { path: p.clone(), source: e }))
            .transpose()?;
        let flags = ConfigLayer {
            rho: self.rho,
            r: self.r,
            horizon: self.horizon,
            seed: self.seed,
            replicates: self.replicates,
            window_size: self.window_size,
            out: self.out,
            n,
            l,
        };
        parse_config(flags, file.as_deref())
    }
}

enum Failure {
    Usage(Error),
    Runtime(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::SizeLimit { .. } => Failure::Usage(e),
            other => Failure::Runtime(other),
        }
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run(common) => {
            let cfg = resolve_run(&common.layer(None, None)?)?;
            for path in run_command(&cfg.params, cfg.window_size, &cfg.out)? {
                println!("wrote {}", path.display());
            }
        }
        Command::Sweep(common) => {
            let spec = resolve_sweep(&common.layer(None, None)?)?;
            let (manifest, path) = sweep_command(&spec)?;
            let failed: Vec<_> = manifest.cells.iter().filter(|c| c.status != "ok").collect();
            println!("wrote {} ({} cells)", path.display(), manifest.cells.len());
            if !failed.is_empty() {
                return Err(Failure::Check(format!("{} cell(s) failed", failed.len())));
            }
        }
        Command::Oracle { common, n, l } => {
            let cfg = resolve_oracle(&common.layer(n, l)?)?;
            let (report, path) = oracle_check_command(&cfg)?;
            println!(
                "variety: kernel {} exact {} rel {:.3e}{}",
                report.variety.kernel,
                report.variety.exact,
                report.variety.rel_err_exact,
                report
                    .variety
                    .monte_carlo
                    .map(|m| format!(" mc {m} z {:.2}", report.variety.mc_z.unwrap_or(f64::NAN)))
                    .unwrap_or_default()
            );
            println!(
                "avg_complexity: kernel {} exact {} rel {:.3e}",
                report.avg_complexity.kernel, report.avg_complexity.exact, report.avg_complexity.rel_err_exact
            );
            println!("wrote {}", path.display());
            if !report.pass {
                return Err(Failure::Check("oracle check failed".into()));
            }
            println!("pass");
        }
        Command::Analyze { common, input } => {
            let cfg = resolve_run(&common.layer(None, None)?)?;
            let (outcome, path) = analyze_command(&input, &cfg.params, cfg.window_size, &cfg.out)?;
            println!(
                "hump found: {} (peak step {})",
                outcome.report.hump.found, outcome.report.hump.t_peak
            );
            println!("wrote {}", path.display());
            if !outcome.mismatched_steps.is_empty() {
                return Err(Failure::Check(format!(
                    "{} row(s) disagree with the kernel, first at step {}",
                    outcome.mismatched_steps.len(),
                    outcome.mismatched_steps[0]
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}
