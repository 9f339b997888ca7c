//! Command-line front end for the generalized-Dicke engine: deterministic
//! file outputs for phase diagrams, stationary points, semiclassical and
//! finite-size densities of states, energy surfaces, trajectories, and a
//! self-validation battery.

mod commands;
mod config;
mod validate;

use clap::{Args, Parser, Subcommand};
use config::{pick, resolve_params, CliError, ParamFlags, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "gendicke", version, about = "Generalized Dicke model analysis engine")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// TOML config file; CLI flags override file values.
    #[arg(long, allow_hyphen_values = true)]
    config: Option<PathBuf>,
    /// Output file path.
    #[arg(long, allow_hyphen_values = true)]
    out: Option<PathBuf>,
    /// RNG seed for stochastic suites (Monte Carlo, random batteries).
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<u64>,
    /// Worker-thread count (reserved; current implementation is
    /// single-threaded).
    #[arg(long, allow_hyphen_values = true)]
    threads: Option<usize>,
    #[command(flatten)]
    params: ParamFlags,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate and classify the stationary points (JSON).
    FixedPoints {
        #[command(flatten)]
        common: Common,
    },
    /// Ground-state phase raster over two parameter axes (CSV).
    PhaseDiagram {
        #[command(flatten)]
        common: Common,
        /// First axis, `name=start:stop:count`.
        #[arg(long, allow_hyphen_values = true)]
        axis1: Option<String>,
        /// Second axis, `name=start:stop:count`.
        #[arg(long, allow_hyphen_values = true)]
        axis2: Option<String>,
    },
    /// Semiclassical density of states over an energy grid (CSV) plus
    /// energy domains and critical energies (JSON sidecar).
    Dos {
        #[command(flatten)]
        common: Common,
        /// Scaled-energy grid, `start:stop:count`.
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
    },
    /// Finite-size spectrum from exact diagonalization (CSV).
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Collective pseudospin length (N/2).
        #[arg(long, allow_hyphen_values = true)]
        j: Option<f64>,
        /// Boson truncation; defaults to a coupling-dependent heuristic.
        #[arg(long, allow_hyphen_values = true)]
        n_max: Option<usize>,
        /// Only report the truncation-converged ground state.
        #[arg(long)]
        gs_only: bool,
    },
    /// Boson-eliminated energy surface on the (u, v) disc (CSV).
    Surface {
        #[command(flatten)]
        common: Common,
        /// u grid, `start:stop:count`.
        #[arg(long, allow_hyphen_values = true)]
        u_range: Option<String>,
        /// v grid, `start:stop:count`.
        #[arg(long, allow_hyphen_values = true)]
        v_range: Option<String>,
    },
    /// Integrate a classical trajectory (CSV).
    Trajectory {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        jz: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t_end: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        dt: Option<f64>,
        /// Integration scheme: `rk4` or `leapfrog`.
        #[arg(long, allow_hyphen_values = true)]
        scheme: Option<String>,
    },
    /// Run the oracle-backed self-validation battery.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Monte Carlo sample count for the DoS cross-check.
        #[arg(long, allow_hyphen_values = true)]
        samples: Option<usize>,
        /// Negative-control hook: corrupt a suite's reference value
        /// (`critical-coupling`) to verify the battery can fail.
        #[arg(long, allow_hyphen_values = true)]
        inject_fault: Option<String>,
    },
}

fn load_config(common: &Common) -> Result<RunConfig, CliError> {
    let cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    // Thread-count plumbing is reserved; still reject nonsense values.
    if common.threads.or(cfg.threads) == Some(0) {
        return Err(config::config_err("threads must be >= 1"));
    }
    Ok(cfg)
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::FixedPoints { common } => {
            let cfg = load_config(&common)?;
            let params = resolve_params(&cfg, &common.params)?;
            commands::cmd_fixed_points(&params, common.out, &cfg)
        }
        Cmd::PhaseDiagram { common, axis1, axis2 } => {
            let cfg = load_config(&common)?;
            let params = resolve_params(&cfg, &common.params)?;
            commands::cmd_phase_diagram(&params, common.out, axis1, axis2, &cfg)
        }
        Cmd::Dos { common, epsilon } => {
            let cfg = load_config(&common)?;
            let params = resolve_params(&cfg, &common.params)?;
            commands::cmd_dos(&params, common.out, epsilon, &cfg)
        }
        Cmd::Spectrum { common, j, n_max, gs_only } => {
            let cfg = load_config(&common)?;
            let params = resolve_params(&cfg, &common.params)?;
            commands::cmd_spectrum(&params, common.out, j, n_max, gs_only, &cfg)
        }
        Cmd::Surface { common, u_range, v_range } => {
            let cfg = load_config(&common)?;
            let params = resolve_params(&cfg, &common.params)?;
            commands::cmd_surface(&params, common.out, u_range, v_range, &cfg)
        }
        Cmd::Trajectory { common, q, p, jz, phi, t_end, dt, scheme } => {
            let cfg = load_config(&common)?;
            let params = resolve_params(&cfg, &common.params)?;
            commands::cmd_trajectory(
                &params, common.out, q, p, jz, phi, t_end, dt, scheme, &cfg,
            )
        }
        Cmd::Validate { common, samples, inject_fault } => {
            let cfg = load_config(&common)?;
            // The battery fixes its own parameter sets; still validate any
            // explicit flags so typos fail fast.
            let _ = resolve_params(&cfg, &common.params)?;
            let seed = pick(common.seed, cfg.seed, 1);
            let samples = pick(samples, cfg.samples, 200_000);
            let delta = pick(None, cfg.delta, gendicke::mc::DEFAULT_DELTA);
            let fault = match inject_fault.as_deref() {
                None => validate::Fault::None,
                Some("critical-coupling") => validate::Fault::CriticalCoupling,
                Some(other) => {
                    return Err(config::config_err(format!("unknown fault `{other}`")))
                }
            };
            let (report, all_pass) = validate::run(seed, samples, delta, fault);
            commands::emit_report(&report, common.out.or(cfg.out).as_deref())?;
            if all_pass {
                Ok(())
            } else {
                Err(config::numerical_err("one or more validation suites failed"))
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
