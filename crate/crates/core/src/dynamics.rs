//! Classical trajectory integration and linear stability analysis.
//!
//! Away from the Bloch-sphere poles the flow is integrated in
//! `(q, p, jz, phi)`; near a pole the integrator switches to the regular
//! `(q, p, u, v)` chart, where the noncanonical bracket contributes a
//! `theta / sin theta` factor to the `(u, v)` equations.

use crate::linalg::eigvals_general_4;
use crate::model::{
    chart_gradient, classical_energy, hamilton_rhs, hessian, pole_hessian_blocks,
    Pole,
};
use crate::params::{normalize_angle, ModelParams, PhaseSpacePoint};
use crate::POLE_GUARD;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

pub type Params = ModelParams<f64>;
pub type Point = PhaseSpacePoint<f64>;

/// `|jz|` above which integration proceeds in the nearest pole chart.
const CHART_ENTER: f64 = 0.9;
/// `|jz|` below which integration returns to the interior coordinates.
const CHART_EXIT: f64 = 0.85;

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("initial condition must be finite with |jz| <= 1")]
    InvalidInitial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Rk4,
    /// Implicit-midpoint stepping in the pole chart (quasi-symplectic on
    /// the noncanonical bracket); optional alternative to RK4.
    SymplecticLeapfrogOnChart,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub point: Point,
    pub epsilon: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub dt: f64,
    pub scheme: Scheme,
    /// Times at which the trajectory came within `POLE_GUARD` of a pole
    /// (integration continues on the chart).
    pub pole_events: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    Interior,
    Chart(Pole),
}

fn interior_field(params: &Params, z: &[f64; 4]) -> [f64; 4] {
    let x = PhaseSpacePoint { q: z[0], p: z[1], jz: z[2].clamp(-1.0, 1.0), phi: z[3] };
    match hamilton_rhs(params, &x) {
        Ok([qd, pd, phid, jzd]) => [qd, pd, jzd, phid],
        // The step logic keeps interior states away from the poles; the
        // guard only trips on transient RK4 substeps, where freezing the
        // spin part for the substep is harmless.
        Err(_) => [params.omega * x.p, -params.omega * x.q, 0.0, 0.0],
    }
}

fn chart_field(params: &Params, pole: Pole, z: &[f64; 4]) -> [f64; 4] {
    let g = chart_gradient(params, pole, z);
    let theta = (z[2] * z[2] + z[3] * z[3]).sqrt();
    let fac = if theta < 1e-8 { 1.0 } else { theta / theta.sin() };
    // {u, v} = -theta/sin(theta) on the south chart, + on the north.
    let sign = match pole {
        Pole::South => -1.0,
        Pole::North => 1.0,
    };
    [g[1], -g[0], sign * fac * g[3], -sign * fac * g[2]]
}

fn to_chart(x: &Point, pole: Pole) -> [f64; 4] {
    let ct = match pole {
        Pole::South => -x.jz,
        Pole::North => x.jz,
    };
    let theta = ct.clamp(-1.0, 1.0).acos();
    [x.q, x.p, theta * x.phi.cos(), theta * x.phi.sin()]
}

fn from_chart(z: &[f64; 4], pole: Pole) -> Point {
    let theta = (z[2] * z[2] + z[3] * z[3]).sqrt();
    let ct = theta.cos();
    let jz = match pole {
        Pole::South => -ct,
        Pole::North => ct,
    };
    let phi = if theta < 1e-300 { 0.0 } else { normalize_angle(z[3].atan2(z[2])) };
    PhaseSpacePoint { q: z[0], p: z[1], jz: jz.clamp(-1.0, 1.0), phi }
}

fn rk4_step(f: impl Fn(&[f64; 4]) -> [f64; 4], z: &[f64; 4], dt: f64) -> [f64; 4] {
    let add = |a: &[f64; 4], b: &[f64; 4], s: f64| {
        [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2], a[3] + s * b[3]]
    };
    let k1 = f(z);
    let k2 = f(&add(z, &k1, dt / 2.0));
    let k3 = f(&add(z, &k2, dt / 2.0));
    let k4 = f(&add(z, &k3, dt));
    [
        z[0] + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        z[1] + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        z[2] + dt / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        z[3] + dt / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
    ]
}

fn implicit_midpoint_step(f: impl Fn(&[f64; 4]) -> [f64; 4], z: &[f64; 4], dt: f64) -> [f64; 4] {
    let mut y = *z;
    for _ in 0..12 {
        let mid = [
            0.5 * (z[0] + y[0]),
            0.5 * (z[1] + y[1]),
            0.5 * (z[2] + y[2]),
            0.5 * (z[3] + y[3]),
        ];
        let k = f(&mid);
        y = [z[0] + dt * k[0], z[1] + dt * k[1], z[2] + dt * k[2], z[3] + dt * k[3]];
    }
    y
}

/// Fixed-step integration of the Hamilton equations; chart switching keeps
/// the flow regular through the poles.
pub fn integrate(params: &Params, x0: &Point, t_end: f64, dt: f64) -> Result<Trajectory, DynamicsError> {
    integrate_with_scheme(params, x0, t_end, dt, Scheme::Rk4)
}

pub fn integrate_with_scheme(
    params: &Params,
    x0: &Point,
    t_end: f64,
    dt: f64,
    scheme: Scheme,
) -> Result<Trajectory, DynamicsError> {
    let finite =
        [x0.q, x0.p, x0.jz, x0.phi].iter().all(|v| v.is_finite()) && x0.jz.abs() <= 1.0;
    if !finite {
        return Err(DynamicsError::InvalidInitial);
    }
    let n_steps = (t_end / dt).round().max(1.0) as usize;
    let mut samples = Vec::with_capacity(n_steps + 1);
    let mut pole_events = Vec::new();

    let mut region =
        if x0.jz.abs() > CHART_ENTER { Region::Chart(nearest_pole(x0.jz)) } else { Region::Interior };
    let mut state = match region {
        Region::Interior => [x0.q, x0.p, x0.jz, x0.phi],
        Region::Chart(pole) => to_chart(x0, pole),
    };
    let point_of = |region: Region, z: &[f64; 4]| -> Point {
        match region {
            Region::Interior => PhaseSpacePoint {
                q: z[0],
                p: z[1],
                jz: z[2].clamp(-1.0, 1.0),
                phi: normalize_angle(z[3]),
            },
            Region::Chart(pole) => from_chart(z, pole),
        }
    };
    samples.push(TrajectorySample {
        t: 0.0,
        point: point_of(region, &state),
        epsilon: classical_energy(params, &point_of(region, &state)),
    });

    for step in 1..=n_steps {
        let t = step as f64 * dt;
        state = {
            let stepper = |f: &dyn Fn(&[f64; 4]) -> [f64; 4], z: &[f64; 4]| match scheme {
                Scheme::Rk4 => rk4_step(f, z, dt),
                Scheme::SymplecticLeapfrogOnChart => implicit_midpoint_step(f, z, dt),
            };
            match region {
                Region::Interior => stepper(&|z: &[f64; 4]| interior_field(params, z), &state),
                Region::Chart(pole) => {
                    stepper(&|z: &[f64; 4]| chart_field(params, pole, z), &state)
                }
            }
        };
        let point = point_of(region, &state);
        if 1.0 - point.jz.abs() < POLE_GUARD {
            pole_events.push(t);
        }
        // Region handoff with hysteresis.
        match region {
            Region::Interior if point.jz.abs() > CHART_ENTER => {
                let pole = nearest_pole(point.jz);
                region = Region::Chart(pole);
                state = to_chart(&point, pole);
            }
            Region::Chart(_) if point.jz.abs() < CHART_EXIT => {
                region = Region::Interior;
                state = [point.q, point.p, point.jz, point.phi];
            }
            _ => {}
        }
        samples.push(TrajectorySample { t, point, epsilon: classical_energy(params, &point) });
    }
    Ok(Trajectory { samples, dt, scheme, pole_events })
}

fn nearest_pole(jz: f64) -> Pole {
    if jz < 0.0 {
        Pole::South
    } else {
        Pole::North
    }
}

/// Eigenvalues of the linearized flow at a stationary point. Interior
/// points use the Jacobian `S H` of the `(q, p, jz, phi)` flow; poles use
/// the chart blocks with the chart symplectic structure. The spectrum is
/// closed under negation; purely imaginary eigenvalues signal a stable
/// center (energy minima/maxima).
pub fn linear_stability(
    params: &Params,
    fp: &crate::fixed_points::FixedPoint,
) -> [Complex64; 4] {
    let jz = fp.point.jz;
    let h = if jz.abs() > 1.0 - 1e-6 {
        let pole = nearest_pole(jz);
        let (bqu, bpv) = pole_hessian_blocks(params, pole);
        // Assemble the chart Hessian in (q, p, u, v) ordering.
        let mut m = [[0.0; 4]; 4];
        m[0][0] = bqu[0][0];
        m[0][2] = bqu[0][1];
        m[2][0] = bqu[1][0];
        m[2][2] = bqu[1][1];
        m[1][1] = bpv[0][0];
        m[1][3] = bpv[0][1];
        m[3][1] = bpv[1][0];
        m[3][3] = bpv[1][1];
        let sgn = match pole {
            Pole::South => -1.0,
            Pole::North => 1.0,
        };
        let s = [
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, sgn],
            [0.0, 0.0, -sgn, 0.0],
        ];
        mat4_mul(&s, &m)
    } else {
        let hess = hessian(params, &fp.point).expect("interior point");
        // Flow ordering (q, p, jz, phi): jz' = -dH/dphi, phi' = +dH/djz.
        let s = [
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
        ];
        mat4_mul(&s, &hess)
    };
    eigvals_general_4(&h).expect("4x4 eigenvalue computation")
}

fn mat4_mul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            for (l, row) in b.iter().enumerate() {
                out[i][k] += a[i][l] * row[k];
            }
        }
    }
    out
}

/// Maximum absolute scaled-energy drift along a trajectory.
pub fn energy_drift(traj: &Trajectory) -> f64 {
    let e0 = traj.samples[0].epsilon;
    traj.samples.iter().map(|s| (s.epsilon - e0).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed_points::{enumerate_fixed_points, Classification, Family};
    use approx::assert_abs_diff_eq;

    fn base() -> Params {
        ModelParams::resonant()
    }

    #[test]
    fn harmonic_oscillator() {
        let x0 = PhaseSpacePoint { q: 1.0, p: 0.0, jz: 0.0, phi: 0.0 };
        let traj = integrate(&base(), &x0, 10.0, 1e-3).unwrap();
        for s in traj.samples.iter().step_by(500) {
            assert_abs_diff_eq!(s.point.q, s.t.cos(), epsilon = 1e-6);
            assert_abs_diff_eq!(s.point.p, -s.t.sin(), epsilon = 1e-6);
        }
    }

    #[test]
    fn fixed_points_are_stationary() {
        let params = Params { xi: 0.5, gamma: 1.4, eta_y: 0.3, eta_z: 0.2, ..base() };
        let set = enumerate_fixed_points(&params).unwrap();
        for fp in set.points.iter().filter(|p| !p.phi_indeterminate) {
            let traj = integrate(&params, &fp.point, 20.0, 1e-3).unwrap();
            let max_disp = traj
                .samples
                .iter()
                .map(|s| {
                    (s.point.q - fp.point.q)
                        .abs()
                        .max((s.point.p - fp.point.p).abs())
                        .max((s.point.jz - fp.point.jz).abs())
                })
                .fold(0.0, f64::max);
            assert!(max_disp < 1e-8, "{:?} drifted {max_disp}", fp.family);
        }
    }

    #[test]
    fn energy_conservation_dicke() {
        let params = Params { xi: 1.0, gamma: 0.8, ..base() };
        let x0 = PhaseSpacePoint { q: 0.4, p: -0.3, jz: -0.5, phi: 1.2 };
        let traj = integrate(&params, &x0, 100.0, 1e-3).unwrap();
        assert!(energy_drift(&traj) < 1e-8, "drift {}", energy_drift(&traj));
    }

    #[test]
    fn chart_and_interior_agree() {
        // Integrate the same initial condition through both code paths by
        // starting just inside and just outside the chart threshold.
        let params = Params { xi: 1.0, gamma: 1.0, ..base() };
        let x0 = PhaseSpacePoint { q: 0.2, p: 0.1, jz: -0.905, phi: 0.7 };
        // Chart path (|jz| > CHART_ENTER).
        let traj = integrate(&params, &x0, 5.0, 1e-4).unwrap();
        // Reference: pure interior RK4 with tiny steps, valid while the
        // trajectory stays away from the pole.
        let mut z = [x0.q, x0.p, x0.jz, x0.phi];
        let dt = 1e-5f64;
        for _ in 0..(5.0 / dt).round() as usize {
            z = rk4_step(|y| interior_field(&params, y), &z, dt);
        }
        let last = traj.samples.last().unwrap().point;
        assert_abs_diff_eq!(last.q, z[0], epsilon = 1e-6);
        assert_abs_diff_eq!(last.p, z[1], epsilon = 1e-6);
        assert_abs_diff_eq!(last.jz, z[2], epsilon = 1e-6);
    }

    #[test]
    fn pole_transit_conserves_energy() {
        // Energy above the separatrix at the south pole: the trajectory can
        // pass arbitrarily close to jz = -1; the chart keeps it regular.
        let params = Params { xi: 1.0, gamma: 1.0, ..base() };
        let x0 = PhaseSpacePoint { q: 0.0, p: 0.0, jz: -0.9995, phi: 0.3 };
        let traj = integrate(&params, &x0, 50.0, 1e-3).unwrap();
        assert!(traj.samples.iter().all(|s| s.point.jz.is_finite()));
        assert!(energy_drift(&traj) < 1e-7, "drift {}", energy_drift(&traj));
    }

    #[test]
    fn implicit_midpoint_scheme_runs() {
        let params = Params { xi: 1.0, gamma: 0.8, ..base() };
        let x0 = PhaseSpacePoint { q: 0.4, p: -0.3, jz: -0.5, phi: 1.2 };
        let traj =
            integrate_with_scheme(&params, &x0, 20.0, 1e-3, Scheme::SymplecticLeapfrogOnChart)
                .unwrap();
        // Implicit midpoint is not exactly conservative on the noncanonical
        // chart bracket; the drift stays O(dt^2)-bounded.
        assert!(energy_drift(&traj) < 1e-5, "drift {}", energy_drift(&traj));
    }

    #[test]
    fn pole_start_integrates_in_chart() {
        // The exact pole is a fixed point of the chart flow; starting there
        // must work and stay put.
        let params = Params { gamma: 0.5, ..base() };
        let x0 = PhaseSpacePoint { q: 0.0, p: 0.0, jz: -1.0, phi: 0.0 };
        let traj = integrate(&params, &x0, 5.0, 1e-3).unwrap();
        for s in traj.samples.iter().step_by(500) {
            assert_abs_diff_eq!(s.point.jz, -1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(s.point.q, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn invalid_initial_rejected() {
        let x0 = PhaseSpacePoint { q: 0.0, p: 0.0, jz: f64::NAN, phi: 0.0 };
        assert!(matches!(integrate(&base(), &x0, 1.0, 1e-3), Err(DynamicsError::InvalidInitial)));
        let x1 = PhaseSpacePoint { q: 0.0, p: 0.0, jz: -1.5, phi: 0.0 };
        assert!(matches!(integrate(&base(), &x1, 1.0, 1e-3), Err(DynamicsError::InvalidInitial)));
    }

    #[test]
    fn stability_normal_phase_center() {
        let params = Params { gamma: 0.5, ..base() };
        let set = enumerate_fixed_points(&params).unwrap();
        let south = set.points.iter().find(|p| p.family == Family::PoleSouth).unwrap();
        let eigs = linear_stability(&params, south);
        for e in &eigs {
            assert!(e.re.abs() < 1e-8, "unstable eigenvalue {e} at stable center");
        }
    }

    #[test]
    fn stability_superradiant_saddle_at_pole() {
        let params = Params { xi: 1.0, gamma: 1.0, ..base() };
        let set = enumerate_fixed_points(&params).unwrap();
        let south = set.points.iter().find(|p| p.family == Family::PoleSouth).unwrap();
        assert_eq!(south.classification, Classification::Saddle);
        let eigs = linear_stability(&params, south);
        assert!(eigs.iter().any(|e| e.re.abs() > 1e-6), "saddle lacks unstable directions");
    }

    #[test]
    fn spectrum_closed_under_negation_and_minima_stable() {
        let params = Params { xi: 0.5, gamma: 1.4, eta_y: 0.3, eta_z: 0.2, ..base() };
        let set = enumerate_fixed_points(&params).unwrap();
        for fp in &set.points {
            let eigs = linear_stability(&params, fp);
            for e in &eigs {
                let has_negation = eigs.iter().any(|o| (e + o).norm() < 1e-10 * (1.0 + e.norm()));
                assert!(has_negation, "spectrum {eigs:?} not closed under negation");
            }
            // A Minimum of the reduced surface makes the full Hessian
            // positive definite (the boson block is +omega I), so the
            // linearized flow is elliptic. A reduced Maximum is a saddle of
            // the full four-dimensional energy and carries no such
            // guarantee.
            if fp.classification == Classification::Minimum {
                for e in &eigs {
                    assert!(e.re.abs() < 1e-8, "{:?} has growing mode {e}", fp.family);
                }
            }
        }
    }
}
