use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nsk_dg::cli::{parse_config_with_out, run_checks, run_convergence, run_simulation, RunConfig};
use nsk_dg::{Error, Result};

#[derive(Parser)]
#[command(name = "nsk-dg", version, about = "Energy-consistent DG simulator for quasi-incompressible two-phase flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write its time series, snapshots and manifest.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// output directory; overrides `out` in the file, defaults to `out`
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence table against the stationary tanh profile with `k = h^2`.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        levels: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Property and audit suite over small built-in cases.
    Check,
}

fn load(path: &Path) -> Result<(RunConfig, Option<String>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config_with_out(&text)
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, out } => {
            let (cfg, file_out) = load(&config)?;
            let dir = out.or(file_out.map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("out"));
            let s = run_simulation(&cfg, &dir)?;
            println!(
                "{} steps, max |deviation| {:.3e}, relative mass drift {:.3e}, output in {}",
                s.steps(),
                s.max_abs_deviation(),
                s.relative_mass_drift(),
                dir.display()
            );
            Ok(true)
        }
        Command::Converge { config, levels, out } => {
            let (cfg, file_out) = load(&config)?;
            let dir = out.or(file_out.map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("out"));
            let rows = run_convergence(&cfg, &levels, Some(&dir))?;
            print!("{}", nsk_dg::cli::output::convergence_csv(&rows));
            Ok(true)
        }
        Command::Check => {
            let outcomes = run_checks()?;
            for o in &outcomes {
                println!("{o}");
            }
            Ok(outcomes.iter().all(|o| o.passed()))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_nonconvergence() { 2 } else { 1 })
        }
    }
}
