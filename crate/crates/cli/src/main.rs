use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shallow_cli::commands::{self, ExactParams, DEFAULT_SPEEDS};
use shallow_cli::{parse_config, CliError};
use shallow_core::{Grid, InitialCondition, RunConfig};

#[derive(Parser)]
#[command(
    name = "shallow",
    version,
    about = "Dispersive shallow-water experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config and write snapshots and diagnostics
    Simulate(RunArgs),
    /// Run a soliton and report errors against the exact translated wave
    Propagate(RunArgs),
    /// Report drift of mass, energy and momentum
    Conserve(RunArgs),
    /// Observed spatial and temporal orders on a soliton
    Convergence(RunArgs),
    /// Tabulate crest, mass and energy of both solitary waves
    Compare {
        /// Grid for the integrals (n and length); defaults to n = 2048, L = 80
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_delimiter = ',')]
        speeds: Option<Vec<f64>>,
    },
    /// Sample the closed-form profiles and their residuals
    Exact {
        /// Optional config; its soliton speed is used when --c is absent
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long, default_value_t = 201)]
        samples: usize,
        #[arg(long, default_value_t = 10.0)]
        range: f64,
        /// Put the new-system crest at xi = 0
        #[arg(long)]
        recenter: bool,
    },
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    Ok(parse_config(&text)?)
}

fn execute(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Simulate(a) => {
            let s = commands::simulate(&load(&a.config)?, &a.out)?;
            println!(
                "steps {}  t_end {}  snapshots {}",
                s.steps, s.t_end, s.snapshots
            );
            println!(
                "drift: mass {:.3e}  energy {:.3e}  momentum {:.3e}",
                s.drift.mass, s.drift.energy, s.drift.total_momentum
            );
        }
        Command::Propagate(a) => {
            let s = commands::propagate(&load(&a.config)?, &a.out)?;
            let e = s.final_error();
            println!("t_end {}  steps {}", s.run.t_end, s.run.steps);
            println!(
                "relative L2 error {:.6e}  max error {:.6e}",
                e.rel_l2, e.max_abs
            );
        }
        Command::Conserve(a) => {
            let d = commands::conserve(&load(&a.config)?, &a.out)?;
            println!("mass drift {:.6e}", d.mass);
            println!("energy drift {:.6e}", d.energy);
            println!("momentum drift {:.6e}", d.total_momentum);
        }
        Command::Convergence(a) => {
            let s = commands::convergence(&load(&a.config)?, &a.out)?;
            for r in &s.spatial {
                println!(
                    "spatial  n {:6}  error {:.4e}  order {:.3}",
                    r.n, r.error, r.order
                );
            }
            for r in &s.temporal {
                println!(
                    "temporal steps {:6}  error {:.4e}  order {:.3}",
                    r.steps, r.error, r.order
                );
            }
            println!(
                "spatial order {:.3}  temporal order {:.3}",
                s.spatial_order(),
                s.temporal_order()
            );
        }
        Command::Compare {
            config,
            out,
            speeds,
        } => {
            let grid = match config {
                Some(p) => load(&p)?.grid()?,
                None => Grid::centered(2048, 80.0)?,
            };
            let speeds = speeds.unwrap_or_else(|| DEFAULT_SPEEDS.to_vec());
            println!(
                "{:>6} {:>10} {:>10} {:>12} {:>12} {:>12} {:>12}",
                "c", "new_crest", "gn_crest", "new_mass", "gn_mass", "new_energy", "gn_energy"
            );
            for r in commands::compare(&grid, &speeds, &out)? {
                println!(
                    "{:>6} {:>10.6} {:>10.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}",
                    r.c, r.new_crest, r.gn_crest, r.new_mass, r.gn_mass, r.new_energy, r.gn_energy
                );
            }
        }
        Command::Exact {
            config,
            out,
            c,
            samples,
            range,
            recenter,
        } => {
            let c = match (c, config) {
                (Some(c), _) => c,
                (None, Some(p)) => match load(&p)?.initial {
                    InitialCondition::Soliton { c, .. } => c,
                    _ => return Err(CliError::Usage("config has no soliton; pass --c".into())),
                },
                (None, None) => {
                    return Err(CliError::Usage(
                        "exact needs --c or a soliton config".into(),
                    ))
                }
            };
            let rows = commands::exact(
                &ExactParams {
                    c,
                    samples,
                    range,
                    recenter,
                },
                &out,
            )?;
            let worst = rows
                .iter()
                .map(|r| r.implicit_residual.abs())
                .filter(|r| r.is_finite())
                .fold(0.0, f64::max);
            println!(
                "{} samples written, max |implicit residual| {:.3e}",
                rows.len(),
                worst
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
