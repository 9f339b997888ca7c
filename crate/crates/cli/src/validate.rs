//! The `validate` subcommand: a battery of self-consistency suites pitting
//! the closed forms against independent brute-force oracles. Every suite is
//! deterministic for a given seed, so the report is byte-identical across
//! reruns.

use gendicke::ModelParamsF64 as Params;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;

/// Deliberately corrupts one suite's reference value; negative control for
/// the validation battery itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    None,
    CriticalCoupling,
}

pub struct SuiteResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn random_params(rng: &mut ChaCha8Rng) -> Params {
    Params {
        omega: rng.gen_range(0.5..2.0),
        omega0: rng.gen_range(0.5..2.0),
        gamma: rng.gen_range(0.0..2.5),
        xi: rng.gen_range(0.0..=1.0),
        eta_x: rng.gen_range(-1.5..1.5),
        eta_y: rng.gen_range(-1.5..1.5),
        eta_z: rng.gen_range(-1.5..1.5),
    }
}

fn suite_critical_couplings(fault: Fault) -> SuiteResult {
    let expected_tc = if fault == Fault::CriticalCoupling { 1.001 } else { 1.0 };
    let tc = gendicke::fixed_points::critical_couplings(&Params::resonant());
    let dicke =
        gendicke::fixed_points::critical_couplings(&Params { xi: 1.0, ..Params::resonant() });
    let zero =
        gendicke::fixed_points::critical_couplings(&Params { eta_z: 1.0, ..Params::resonant() });
    let err = (tc.gamma_c_x - expected_tc)
        .abs()
        .max((dicke.gamma_c_x - 0.5).abs())
        .max(zero.gamma_c_x.abs());
    SuiteResult {
        name: "critical-couplings",
        pass: err < 1e-12,
        detail: format!("max deviation {err:.3e}"),
    }
}

fn suite_ground_state_oracle(seed: u64, n_sets: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA1);
    let mut worst = 0.0f64;
    for _ in 0..n_sets {
        let params = random_params(&mut rng);
        let closed = gendicke::phase_diagram::ground_state(&params).epsilon;
        let brute = gendicke::oracles::grid_min_energy(&params);
        worst = worst.max((closed - brute).abs());
    }
    SuiteResult {
        name: "ground-state-oracle",
        pass: worst < 1e-6,
        detail: format!("{n_sets} random sets, worst |closed - brute| = {worst:.3e}"),
    }
}

fn suite_gradient(seed: u64, n_sets: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xB2);
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    while checked < n_sets {
        let params = random_params(&mut rng);
        let f_x = params.f_x();
        let f_y = params.f_y();
        // Stay away from phase boundaries, where only one-sided derivatives
        // exist.
        if (f_x - 1.0).abs() < 1e-3
            || (f_y - 1.0).abs() < 1e-3
            || (f_x >= 1.0 && f_y >= 1.0 && (f_x - f_y).abs() < 1e-3)
        {
            continue;
        }
        let g = match gendicke::phase_diagram::gs_gradient(&params) {
            gendicke::phase_diagram::GsGradient::Interior(g) => g,
            _ => continue,
        };
        let h = 1e-5;
        for k in 0..4 {
            let step = |p: &mut Params, s: f64| match k {
                0 => p.gamma += s,
                1 => p.eta_x += s,
                2 => p.eta_y += s,
                _ => p.eta_z += s,
            };
            let eval = |s: f64| {
                let mut p = params;
                step(&mut p, s);
                gendicke::phase_diagram::ground_state(&p).epsilon
            };
            let d1 = (eval(h) - eval(-h)) / (2.0 * h);
            let d2 = (eval(h / 2.0) - eval(-h / 2.0)) / h;
            let fd = (4.0 * d2 - d1) / 3.0;
            worst = worst.max((g[k] - fd).abs() / 1.0f64.max(fd.abs()));
        }
        checked += 1;
    }
    SuiteResult {
        name: "gradient-finite-difference",
        pass: worst < 1e-5,
        detail: format!("{n_sets} off-boundary sets, worst relative deviation {worst:.3e}"),
    }
}

fn suite_dos(seed: u64) -> SuiteResult {
    let _ = seed;
    let configs = [
        Params { gamma: 1.5, eta_y: 0.5, ..Params::resonant() },
        Params { xi: 1.0, gamma: 1.0, ..Params::resonant() },
        Params { xi: 0.5, gamma: 1.0, eta_y: -1.0, ..Params::resonant() },
    ];
    let mut worst_sat = 0.0f64;
    let mut worst_jump = 0.0f64;
    for params in &configs {
        let (domains, _) = gendicke::dos::energy_domains(params);
        let top = domains.last().map(|d| d.lower).unwrap_or(0.0);
        worst_sat = worst_sat.max((gendicke::dos::dos(params, top + 0.5).nu_scaled - 1.0).abs());
        let delta = 1e-5;
        for d in &domains {
            if d.lower.is_finite() {
                let lo = gendicke::dos::dos(params, d.lower - delta).nu_scaled;
                let hi = gendicke::dos::dos(params, d.lower + delta).nu_scaled;
                worst_jump = worst_jump.max((hi - lo).abs());
            }
        }
    }
    SuiteResult {
        name: "dos-saturation-continuity",
        pass: worst_sat == 0.0 && worst_jump < 1e-3,
        detail: format!(
            "saturation deviation {worst_sat:.3e}, worst boundary jump {worst_jump:.3e}"
        ),
    }
}

fn suite_dos_vs_mc(seed: u64, n_samples: usize, delta: f64) -> SuiteResult {
    let params = Params { xi: 1.0, gamma: 1.0, ..Params::resonant() };
    // The lowest probe stays well above the ground-state energy (-2.125):
    // the shrinking pocket just above it yields too few shell hits for the
    // Gaussian error model at modest sample counts.
    let energies = [-1.6, -1.3, -1.0, -0.7, -0.3, 0.1, 0.5, 0.9];
    let mc = gendicke::mc::mc_dos(&params, &energies, n_samples, delta, seed);
    let mut worst_sigma = 0.0f64;
    for r in &mc {
        let nu = gendicke::dos::dos(&params, r.epsilon).nu_scaled;
        // The floor absorbs the O(delta^2) shell bias and guards the
        // zero-hit case, where the binomial standard error vanishes.
        let sigma = (r.nu_scaled - nu).abs() / (r.std_error + nu / (n_samples as f64).sqrt() + 2e-3);
        worst_sigma = worst_sigma.max(sigma);
    }
    SuiteResult {
        name: "dos-vs-monte-carlo",
        pass: worst_sigma < 3.0,
        detail: format!("{n_samples} samples, worst deviation {worst_sigma:.2} sigma"),
    }
}

fn suite_hessian(seed: u64, n_points: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC3);
    let mut worst = 0.0f64;
    for _ in 0..n_points {
        let params = random_params(&mut rng);
        let x = gendicke::PhaseSpacePointF64 {
            q: rng.gen_range(-2.0..2.0),
            p: rng.gen_range(-2.0..2.0),
            jz: rng.gen_range(-0.95..0.95),
            phi: rng.gen_range(0.0..std::f64::consts::TAU),
        };
        let h = gendicke::model::hessian(&params, &x).expect("interior point");
        let fd = gendicke::oracles::fd_hessian4(
            |z| {
                gendicke::model::classical_energy(
                    &params,
                    &gendicke::PhaseSpacePointF64 { q: z[0], p: z[1], jz: z[2], phi: z[3] },
                ) * params.omega0
            },
            &[x.q, x.p, x.jz, x.phi],
            1e-4,
        );
        for i in 0..4 {
            for k in 0..4 {
                worst = worst.max((h[i][k] - fd[i][k]).abs() / 1.0f64.max(fd[i][k].abs()));
            }
        }
    }
    // Symmetric Tavis-Cummings pole determinant closed form.
    let sym = Params { gamma: 1.3, eta_x: 0.5, eta_y: 0.5, ..Params::resonant() };
    let det_err = (gendicke::model::pole_determinant(&sym, 0.7) - 1.3f64.powi(4)).abs();
    SuiteResult {
        name: "hessian-closed-forms",
        pass: worst < 1e-5 && det_err < 1e-10,
        detail: format!(
            "{n_points} points, worst entry deviation {worst:.3e}; pole determinant deviation {det_err:.3e}"
        ),
    }
}

fn suite_dynamics() -> SuiteResult {
    let params = Params { xi: 0.5, gamma: 1.4, eta_y: 0.3, eta_z: 0.2, ..Params::resonant() };
    let set = match gendicke::fixed_points::enumerate_fixed_points(&params) {
        Ok(s) => s,
        Err(e) => {
            return SuiteResult {
                name: "dynamics-stationarity",
                pass: false,
                detail: format!("fixed-point enumeration failed: {e}"),
            }
        }
    };
    let mut worst = 0.0f64;
    for fp in &set.points {
        let traj = match gendicke::dynamics::integrate(&params, &fp.point, 10.0, 1e-3) {
            Ok(t) => t,
            Err(e) => {
                return SuiteResult {
                    name: "dynamics-stationarity",
                    pass: false,
                    detail: format!("integration failed: {e}"),
                }
            }
        };
        for s in &traj.samples {
            worst = worst
                .max((s.point.q - fp.point.q).abs())
                .max((s.point.p - fp.point.p).abs())
                .max((s.point.jz - fp.point.jz).abs());
        }
    }
    SuiteResult {
        name: "dynamics-stationarity",
        pass: worst < 1e-8,
        detail: format!("{} fixed points, worst drift {worst:.3e}", set.points.len()),
    }
}

/// Runs the full battery; returns the report text and whether all suites
/// passed.
pub fn run(seed: u64, samples: usize, delta: f64, fault: Fault) -> (String, bool) {
    let suites = vec![
        suite_critical_couplings(fault),
        suite_ground_state_oracle(seed, 25),
        suite_gradient(seed, 25),
        suite_dos(seed),
        suite_dos_vs_mc(seed, samples, delta),
        suite_hessian(seed, 100),
        suite_dynamics(),
    ];
    let mut report = String::new();
    let mut all_pass = true;
    for s in &suites {
        all_pass &= s.pass;
        let _ = writeln!(
            report,
            "{} {}: {}",
            if s.pass { "PASS" } else { "FAIL" },
            s.name,
            s.detail
        );
    }
    let _ = writeln!(
        report,
        "{} ({}/{} suites passed, seed {seed})",
        if all_pass { "OK" } else { "FAILED" },
        suites.iter().filter(|s| s.pass).count(),
        suites.len()
    );
    (report, all_pass)
}
