//! `redlin`: steady states, sweeps, trajectories, negativity thresholds and
//! self-validation for the Redfield/Lindblad qubit master-equation models.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ModelChoice, OutputFormat, RawConfig, RunConfig, Spacing, UsageError};

#[derive(Parser)]
#[command(
    name = "redlin",
    about = "Redfield vs Lindblad master-equation toolkit for a dissipative qubit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Model: redfield | lindblad | both
    #[arg(long, value_parser = clap::value_parser!(ModelChoice))]
    model: Option<ModelChoice>,
    /// Qubit energy splitting ω₀
    #[arg(long)]
    omega0: Option<f64>,
    /// Longitudinal (σᶻ) coupling amplitude
    #[arg(long)]
    f1: Option<f64>,
    /// Transverse (σˣ) coupling amplitude
    #[arg(long)]
    f2: Option<f64>,
    /// Bath temperature
    #[arg(long = "T")]
    temperature: Option<f64>,
    /// Spectral strength prefactor
    #[arg(long)]
    g: Option<f64>,
    /// Spectral exponent (1 = ohmic)
    #[arg(long)]
    s: Option<f64>,
    /// Spectral cutoff frequency
    #[arg(long = "omega-c")]
    omega_c: Option<f64>,
    /// Config file with `key = value` lines (flags take precedence)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json
    #[arg(long, value_parser = clap::value_parser!(OutputFormat))]
    format: Option<OutputFormat>,
    /// Significant digits in numeric output (6–17)
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Args)]
struct SweepOpts {
    /// Sweep parameter (only omega0 is supported)
    #[arg(long, default_value = "omega0")]
    param: String,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Grid spacing: linear | log
    #[arg(long, value_parser = clap::value_parser!(Spacing))]
    spacing: Option<Spacing>,
}

#[derive(Args)]
struct EvolveOpts {
    /// Final time
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Number of samples including t = 0
    #[arg(long)]
    samples: Option<usize>,
    /// Initial state as Bloch components `x,y,z`
    #[arg(long)]
    rho0: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Steady state at a single parameter point
    Steady {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Steady-state sweep over omega0 (defaults reproduce the figure data)
    Sweep {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        sweep: SweepOpts,
    },
    /// Propagate an initial state and tabulate the trajectory
    Evolve {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        evolve: EvolveOpts,
    },
    /// Find where the Redfield steady-state population turns negative
    Threshold {
        #[command(flatten)]
        common: CommonOpts,
        /// Lower bracket edge
        #[arg(long, default_value_t = 1.0)]
        from: f64,
        /// Upper bracket edge
        #[arg(long, default_value_t = 50.0)]
        to: f64,
        /// File holding a reference omega0* to compare against
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Run the internal consistency checks
    Validate {
        #[command(flatten)]
        common: CommonOpts,
        /// Override every check tolerance (for failure-reporting demos)
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn build_raw(common: &CommonOpts) -> Result<RawConfig, UsageError> {
    let mut raw = RawConfig::default();
    if let Some(path) = &common.config {
        let map = RawConfig::read_file(path)?;
        raw.apply_file(&map)?;
    }
    if let Some(v) = common.model {
        raw.model = v;
    }
    if let Some(v) = common.omega0 {
        raw.omega0 = v;
    }
    if let Some(v) = common.f1 {
        raw.f1 = v;
    }
    if let Some(v) = common.f2 {
        raw.f2 = v;
    }
    if let Some(v) = common.temperature {
        raw.temperature = v;
    }
    if let Some(v) = common.g {
        raw.g = v;
    }
    if let Some(v) = common.s {
        raw.s = v;
    }
    if let Some(v) = common.omega_c {
        raw.omega_c = v;
    }
    if let Some(v) = common.format {
        raw.format = v;
    }
    if let Some(v) = &common.out {
        raw.out = Some(v.display().to_string());
    }
    if let Some(v) = common.precision {
        raw.precision = v;
    }
    Ok(raw)
}

fn resolve(common: &CommonOpts) -> Result<(RawConfig, RunConfig), UsageError> {
    let raw = build_raw(common)?;
    let run = raw.resolve()?;
    Ok((raw, run))
}

fn usage_error(e: &UsageError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Steady { common } => match resolve(common) {
            Ok((_, run)) => commands::cmd_steady(&run),
            Err(e) => return usage_error(&e),
        },
        Command::Sweep { common, sweep } => match resolve(common) {
            Ok((mut raw, run)) => {
                if sweep.param != "omega0" {
                    return usage_error(&UsageError(format!(
                        "unsupported sweep parameter '{}' (only omega0)",
                        sweep.param
                    )));
                }
                if let Some(v) = sweep.from {
                    raw.sweep_from = v;
                }
                if let Some(v) = sweep.to {
                    raw.sweep_to = v;
                }
                if let Some(v) = sweep.steps {
                    raw.sweep_steps = v;
                }
                if let Some(v) = sweep.spacing {
                    raw.sweep_spacing = v;
                }
                commands::cmd_sweep(&run, &raw)
            }
            Err(e) => return usage_error(&e),
        },
        Command::Evolve { common, evolve } => match resolve(common) {
            Ok((mut raw, run)) => {
                if let Some(v) = evolve.t_max {
                    raw.t_max = v;
                }
                if let Some(v) = evolve.samples {
                    raw.samples = v;
                }
                if let Some(s) = &evolve.rho0 {
                    match config::parse_rho0(s) {
                        Ok(v) => raw.rho0 = v,
                        Err(e) => return usage_error(&e),
                    }
                }
                commands::cmd_evolve(&run, &raw)
            }
            Err(e) => return usage_error(&e),
        },
        Command::Threshold {
            common,
            from,
            to,
            golden,
        } => match resolve(common) {
            Ok((_, run)) => commands::cmd_threshold(
                &run,
                *from,
                *to,
                golden.as_ref().map(|p| p.to_str().unwrap_or_default()),
            ),
            Err(e) => return usage_error(&e),
        },
        Command::Validate { common, tol } => match resolve(common) {
            Ok((_, run)) => commands::cmd_validate(&run, *tol),
            Err(e) => return usage_error(&e),
        },
    };
    ExitCode::from(code as u8)
}
