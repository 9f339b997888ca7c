//! The analysis subcommands: each resolves its configuration, runs the
//! corresponding engine call, and writes deterministic file output.

use crate::config::{
    config_err, fmt_f64, numerical_err, parse_axis, pick, CliError, Range, RunConfig,
};
use gendicke::dynamics::Scheme;
use gendicke::ModelParamsF64 as Params;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Snake-case name of a serde-serializable enum variant.
pub fn variant_name<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::from("?"),
    }
}

fn write_output(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| config_err(format!("cannot write {}: {e}", path.display())))
}

fn require_out(flag: Option<PathBuf>, config: &RunConfig) -> Result<PathBuf, CliError> {
    flag.or_else(|| config.out.clone())
        .ok_or_else(|| config_err("no output path: pass --out or set `out` in the config"))
}

pub fn cmd_fixed_points(params: &Params, out: Option<PathBuf>, config: &RunConfig) -> Result<(), CliError> {
    let out = require_out(out, config)?;
    let set = gendicke::fixed_points::enumerate_fixed_points(params).map_err(numerical_err)?;
    #[derive(Serialize)]
    struct Report<'a> {
        params: &'a Params,
        fixed_points: &'a gendicke::fixed_points::FixedPointSet,
    }
    let json = serde_json::to_string_pretty(&Report { params, fixed_points: &set })
        .map_err(numerical_err)?;
    write_output(&out, &(json + "\n"))
}

pub fn cmd_phase_diagram(
    params: &Params,
    out: Option<PathBuf>,
    axis1: Option<String>,
    axis2: Option<String>,
    config: &RunConfig,
) -> Result<(), CliError> {
    let out = require_out(out, config)?;
    let axis1 = axis1
        .or_else(|| config.axis1.clone())
        .ok_or_else(|| config_err("phase-diagram needs --axis1 name=start:stop:count"))?;
    let axis2 = axis2
        .or_else(|| config.axis2.clone())
        .ok_or_else(|| config_err("phase-diagram needs --axis2 name=start:stop:count"))?;
    let spec = gendicke::phase_diagram::SweepSpec {
        base: *params,
        axis1: parse_axis(&axis1)?,
        axis2: parse_axis(&axis2)?,
        links: vec![],
    };
    let rows = gendicke::phase_diagram::sweep(&spec).map_err(config_err)?;
    let mut csv = String::from("v1,v2,label,dominant,epsilon,n_fixed_points\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(r.v1),
            fmt_f64(r.v2),
            variant_name(&r.phase.label),
            variant_name(&r.phase.dominant),
            fmt_f64(r.epsilon),
            r.n_fixed_points
        ));
    }
    write_output(&out, &csv)
}

pub fn cmd_dos(
    params: &Params,
    out: Option<PathBuf>,
    epsilon: Option<String>,
    config: &RunConfig,
) -> Result<(), CliError> {
    let out = require_out(out, config)?;
    let range = epsilon
        .or_else(|| config.epsilon.clone())
        .ok_or_else(|| config_err("dos needs --epsilon start:stop:count"))?;
    let grid = Range::parse(&range)?;
    let set = gendicke::fixed_points::enumerate_fixed_points(params).map_err(numerical_err)?;
    let mut csv = String::from("epsilon,nu_scaled,domain,quadrature_error\n");
    for eps in grid.values() {
        let r = gendicke::dos::dos_with_set(params, eps, &set);
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(r.epsilon),
            fmt_f64(r.nu_scaled),
            variant_name(&r.domain),
            fmt_f64(r.quadrature_error)
        ));
    }
    write_output(&out, &csv)?;
    // Companion JSON: energy domains and critical energies.
    let (domains, criticals) = gendicke::dos::energy_domains(params);
    #[derive(Serialize)]
    struct Domains<'a> {
        params: &'a Params,
        domains: Vec<gendicke::dos::EnergyDomain>,
        critical_energies: Vec<gendicke::dos::CriticalEnergy>,
    }
    let json = serde_json::to_string_pretty(&Domains {
        params,
        domains,
        critical_energies: criticals,
    })
    .map_err(numerical_err)?;
    write_output(&out.with_extension("domains.json"), &(json + "\n"))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_spectrum(
    params: &Params,
    out: Option<PathBuf>,
    j: Option<f64>,
    n_max: Option<usize>,
    gs_only: bool,
    config: &RunConfig,
) -> Result<(), CliError> {
    let out = require_out(out, config)?;
    let j = pick(j, config.j, 10.0);
    let gs_only = gs_only || config.gs_only.unwrap_or(false);
    let n_max = n_max
        .or(config.n_max)
        .unwrap_or_else(|| gendicke::quantum::QuantumModel::heuristic_n_max(params, j));
    let model = gendicke::quantum::QuantumModel::new(*params, j, n_max).map_err(config_err)?;
    if gs_only {
        let res = gendicke::quantum::ground_state(&model).map_err(numerical_err)?;
        let mut csv = String::from("j,n_max_used,converged,gs_epsilon\n");
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(j),
            res.n_max_used,
            res.converged,
            fmt_f64(res.gs_epsilon)
        ));
        return write_output(&out, &csv);
    }
    let eigs = gendicke::quantum::full_spectrum(&model).map_err(numerical_err)?;
    let mut csv = String::from("k,epsilon\n");
    for (k, e) in eigs.iter().enumerate() {
        csv.push_str(&format!("{},{}\n", k, fmt_f64(*e)));
    }
    write_output(&out, &csv)
}

pub fn cmd_surface(
    params: &Params,
    out: Option<PathBuf>,
    u_range: Option<String>,
    v_range: Option<String>,
    config: &RunConfig,
) -> Result<(), CliError> {
    let out = require_out(out, config)?;
    let default = || format!("{}:{}:101", -std::f64::consts::PI, std::f64::consts::PI);
    let u = Range::parse(&u_range.or_else(|| config.u_range.clone()).unwrap_or_else(default))?;
    let v = Range::parse(&v_range.or_else(|| config.v_range.clone()).unwrap_or_else(default))?;
    let mut csv = String::from("u,v,epsilon\n");
    for uu in u.values() {
        for vv in v.values() {
            let eps = gendicke::model::surface_energy(params, uu, vv);
            csv.push_str(&format!("{},{},{}\n", fmt_f64(uu), fmt_f64(vv), fmt_f64(eps)));
        }
    }
    write_output(&out, &csv)
}

pub fn parse_scheme(s: &str) -> Result<Scheme, CliError> {
    match s {
        "rk4" => Ok(Scheme::Rk4),
        "leapfrog" => Ok(Scheme::SymplecticLeapfrogOnChart),
        other => Err(config_err(format!("unknown scheme `{other}` (expected rk4 or leapfrog)"))),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_trajectory(
    params: &Params,
    out: Option<PathBuf>,
    q: Option<f64>,
    p: Option<f64>,
    jz: Option<f64>,
    phi: Option<f64>,
    t_end: Option<f64>,
    dt: Option<f64>,
    scheme: Option<String>,
    config: &RunConfig,
) -> Result<(), CliError> {
    let out = require_out(out, config)?;
    let x0 = gendicke::PhaseSpacePointF64 {
        q: pick(q, config.q, 0.0),
        p: pick(p, config.p, 0.0),
        jz: pick(jz, config.jz, 0.0),
        phi: pick(phi, config.phi, 0.0),
    };
    let t_end = pick(t_end, config.t_end, 100.0);
    let dt = pick(dt, config.dt, 1e-3);
    if !(t_end > 0.0 && dt > 0.0) {
        return Err(config_err("trajectory needs t_end > 0 and dt > 0"));
    }
    let scheme = parse_scheme(&pick(scheme, config.scheme.clone(), String::from("rk4")))?;
    let traj = gendicke::dynamics::integrate_with_scheme(params, &x0, t_end, dt, scheme)
        .map_err(numerical_err)?;
    let mut csv = String::from("t,q,p,jz,phi,epsilon\n");
    for s in &traj.samples {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(s.t),
            fmt_f64(s.point.q),
            fmt_f64(s.point.p),
            fmt_f64(s.point.jz),
            fmt_f64(s.point.phi),
            fmt_f64(s.epsilon)
        ));
    }
    write_output(&out, &csv)
}

/// Writes validate-report text to stdout and, if requested, to a file.
pub fn emit_report(report: &str, out: Option<&Path>) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    stdout
        .write_all(report.as_bytes())
        .map_err(|e| config_err(format!("cannot write report: {e}")))?;
    if let Some(path) = out {
        write_output(path, report)?;
    }
    Ok(())
}
