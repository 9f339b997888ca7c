//! Run configuration: flat TOML key-value files with CLI flags overriding
//! file values, plus `start:stop:count` range parsing.

use gendicke::phase_diagram::ParamName;
use gendicke::ModelParamsF64 as Params;
use serde::Deserialize;
use std::fmt;
use std::path::PathBuf;

/// Process exit codes: `0` success, `2` configuration error, `3` numerical
/// nonconvergence.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

pub fn config_err(msg: impl fmt::Display) -> CliError {
    CliError::Config(msg.to_string())
}

pub fn numerical_err(msg: impl fmt::Display) -> CliError {
    CliError::Numerical(msg.to_string())
}

/// Flat configuration file. Every key is optional; unknown keys are
/// rejected. Ranges are strings `start:stop:count`; axes are
/// `name=start:stop:count`.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    // Model parameters.
    pub omega: Option<f64>,
    pub omega0: Option<f64>,
    pub gamma: Option<f64>,
    pub xi: Option<f64>,
    pub eta_x: Option<f64>,
    pub eta_y: Option<f64>,
    pub eta_z: Option<f64>,
    // Common run settings.
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    // phase-diagram axes.
    pub axis1: Option<String>,
    pub axis2: Option<String>,
    // dos energy grid.
    pub epsilon: Option<String>,
    // spectrum settings.
    pub j: Option<f64>,
    pub n_max: Option<usize>,
    pub gs_only: Option<bool>,
    // surface grid.
    pub u_range: Option<String>,
    pub v_range: Option<String>,
    // trajectory settings.
    pub q: Option<f64>,
    pub p: Option<f64>,
    pub jz: Option<f64>,
    pub phi: Option<f64>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub scheme: Option<String>,
    // Monte Carlo / validation settings.
    pub samples: Option<usize>,
    pub delta: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &PathBuf) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(config_err)
    }
}

/// Evenly spaced grid parsed from `start:stop:count` (`count >= 1`; a
/// single-point grid sits at `start`).
#[derive(Debug, Clone, Copy)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(config_err(format!("range `{s}` is not start:stop:count")));
        }
        let start: f64 =
            parts[0].parse().map_err(|_| config_err(format!("bad range start `{}`", parts[0])))?;
        let stop: f64 =
            parts[1].parse().map_err(|_| config_err(format!("bad range stop `{}`", parts[1])))?;
        let count: usize =
            parts[2].parse().map_err(|_| config_err(format!("bad range count `{}`", parts[2])))?;
        if count < 1 {
            return Err(config_err(format!("range `{s}` needs count >= 1")));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(config_err(format!("range `{s}` has non-finite endpoints")));
        }
        Ok(Range { start, stop, count })
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

pub fn parse_param_name(s: &str) -> Result<ParamName, CliError> {
    Ok(match s {
        "omega" => ParamName::Omega,
        "omega0" => ParamName::Omega0,
        "gamma" => ParamName::Gamma,
        "xi" => ParamName::Xi,
        "eta_x" => ParamName::EtaX,
        "eta_y" => ParamName::EtaY,
        "eta_z" => ParamName::EtaZ,
        "delta_zx" => ParamName::DeltaZx,
        "delta_zy" => ParamName::DeltaZy,
        other => {
            return Err(config_err(format!(
                "unknown parameter `{other}` (expected omega, omega0, gamma, xi, eta_x, eta_y, eta_z, delta_zx, delta_zy)"
            )))
        }
    })
}

/// `name=start:stop:count` axis specifier.
pub fn parse_axis(s: &str) -> Result<gendicke::phase_diagram::Axis, CliError> {
    let (name, range) = s
        .split_once('=')
        .ok_or_else(|| config_err(format!("axis `{s}` is not name=start:stop:count")))?;
    let name = parse_param_name(name.trim())?;
    let r = Range::parse(range.trim())?;
    Ok(gendicke::phase_diagram::Axis { name, start: r.start, stop: r.stop, count: r.count })
}

/// Model-parameter CLI flags; any flag set here overrides the config file.
#[derive(Debug, Default, Clone, Copy, clap::Args)]
pub struct ParamFlags {
    #[arg(long, allow_hyphen_values = true, help = "Boson mode frequency")]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true, help = "Qubit splitting")]
    pub omega0: Option<f64>,
    #[arg(long, allow_hyphen_values = true, help = "Light-matter coupling")]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true, help = "Counter-rotating weight in [0, 1]")]
    pub xi: Option<f64>,
    #[arg(long, allow_hyphen_values = true, help = "Collective Jx^2 interaction")]
    pub eta_x: Option<f64>,
    #[arg(long, allow_hyphen_values = true, help = "Collective Jy^2 interaction")]
    pub eta_y: Option<f64>,
    #[arg(long, allow_hyphen_values = true, help = "Collective Jz^2 interaction")]
    pub eta_z: Option<f64>,
}

/// Resolve the effective model parameters: defaults, then the config file,
/// then CLI flags.
pub fn resolve_params(config: &RunConfig, flags: &ParamFlags) -> Result<Params, CliError> {
    let mut p = Params::resonant();
    let apply = |slot: &mut f64, file: Option<f64>, flag: Option<f64>| {
        if let Some(v) = file {
            *slot = v;
        }
        if let Some(v) = flag {
            *slot = v;
        }
    };
    apply(&mut p.omega, config.omega, flags.omega);
    apply(&mut p.omega0, config.omega0, flags.omega0);
    apply(&mut p.gamma, config.gamma, flags.gamma);
    apply(&mut p.xi, config.xi, flags.xi);
    apply(&mut p.eta_x, config.eta_x, flags.eta_x);
    apply(&mut p.eta_y, config.eta_y, flags.eta_y);
    apply(&mut p.eta_z, config.eta_z, flags.eta_z);
    p.validate().map_err(config_err)?;
    Ok(p)
}

/// Pick the first present value among flag, config entry, and default.
pub fn pick<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// 17-significant-digit float formatting ('.' decimal, locale-free) for
/// round-trip-exact CSV output.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
