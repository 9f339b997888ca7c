//! Classical Hamiltonian, Hamilton vector field, Hessian, and the `(u, v)`
//! energy-surface chart.
//!
//! All energies are reported in scaled units `epsilon = E / (omega0 j)`;
//! internal unscaled expressions refer to `H = omega0 * epsilon`.

use crate::params::{lit, ModelParams, PhaseSpacePoint, Real, SurfacePoint};
use crate::POLE_GUARD;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("|jz| too close to 1: the (jz, phi) chart is singular at the poles")]
    PoleSingularity,
}

/// Scaled classical energy
/// `epsilon = [ (omega/2)(q^2 + p^2) + jz (omega0 + eta_z jz / 2)
///   + (1 - jz^2)(eta_x cos^2 phi + eta_y sin^2 phi)/2
///   + gamma sqrt(1 - jz^2) ((1+xi) q cos phi - (1-xi) p sin phi) ] / omega0`.
pub fn classical_energy<F: Real>(params: &ModelParams<F>, x: &PhaseSpacePoint<F>) -> F {
    let half = lit::<F>(0.5);
    let s2 = (F::one() - x.jz * x.jz).max(F::zero());
    let s = s2.sqrt();
    let (c, sn) = (x.phi.cos(), x.phi.sin());
    let boson = half * params.omega * (x.q * x.q + x.p * x.p);
    let spin = x.jz * (params.omega0 + half * params.eta_z * x.jz)
        + half * s2 * (params.eta_x * c * c + params.eta_y * sn * sn);
    let coupling = params.gamma
        * s
        * ((F::one() + params.xi) * x.q * c - (F::one() - params.xi) * x.p * sn);
    (boson + spin + coupling) / params.omega0
}

/// Hamilton equations: returns `(dq/dt, dp/dt, dphi/dt, djz/dt)`.
///
/// `(q, p)` and `(phi, jz)` are canonical pairs of `H = omega0 * epsilon`:
/// `dq/dt = dH/dp`, `dp/dt = -dH/dq`, `dphi/dt = dH/djz`, `djz/dt = -dH/dphi`.
pub fn hamilton_rhs<F: Real>(
    params: &ModelParams<F>,
    x: &PhaseSpacePoint<F>,
) -> Result<[F; 4], ModelError> {
    if x.jz.abs() >= F::one() - lit(POLE_GUARD) {
        return Err(ModelError::PoleSingularity);
    }
    let s2 = F::one() - x.jz * x.jz;
    let s = s2.sqrt();
    let (c, sn) = (x.phi.cos(), x.phi.sin());
    let op = F::one() + params.xi;
    let om = F::one() - params.xi;
    let q_dot = params.omega * x.p - params.gamma * s * om * sn;
    let p_dot = -params.omega * x.q - params.gamma * s * op * c;
    let phi_dot = params.omega0 + params.eta_z * x.jz
        - x.jz * (params.eta_x * c * c + params.eta_y * sn * sn)
        - params.gamma * x.jz / s * (op * x.q * c - om * x.p * sn);
    let jz_dot = s2 * (params.eta_x - params.eta_y) * c * sn
        + params.gamma * s * (op * x.q * sn + om * x.p * c);
    Ok([q_dot, p_dot, phi_dot, jz_dot])
}

/// Hessian of `H = omega0 * epsilon` in the ordering `(q, p, jz, phi)`.
pub fn hessian<F: Real>(
    params: &ModelParams<F>,
    x: &PhaseSpacePoint<F>,
) -> Result<[[F; 4]; 4], ModelError> {
    if x.jz.abs() >= F::one() - lit(POLE_GUARD) {
        return Err(ModelError::PoleSingularity);
    }
    let s2 = F::one() - x.jz * x.jz;
    let s = s2.sqrt();
    let (c, sn) = (x.phi.cos(), x.phi.sin());
    let op = F::one() + params.xi;
    let om = F::one() - params.xi;
    let two = lit::<F>(2.0);
    // Recurrent combination (1+xi) q cos(phi) - (1-xi) p sin(phi).
    let qp_proj = op * x.q * c - om * x.p * sn;
    let qp_cross = op * x.q * sn + om * x.p * c;

    let h_qq = params.omega;
    let h_pp = params.omega;
    let h_qp = F::zero();
    let h_qjz = -params.gamma * x.jz / s * op * c;
    let h_pjz = params.gamma * x.jz / s * om * sn;
    let h_qphi = -params.gamma * s * op * sn;
    let h_pphi = -params.gamma * s * om * c;
    let h_jzjz = params.eta_z
        - (params.eta_x * c * c + params.eta_y * sn * sn)
        - params.gamma / (s2 * s) * qp_proj;
    let h_jzphi =
        x.jz * (params.eta_x - params.eta_y) * two * c * sn + params.gamma * x.jz / s * qp_cross;
    let h_phiphi =
        s2 * (params.eta_x - params.eta_y) * (sn * sn - c * c) - params.gamma * s * qp_proj;

    Ok([
        [h_qq, h_qp, h_qjz, h_qphi],
        [h_qp, h_pp, h_pjz, h_pphi],
        [h_qjz, h_pjz, h_jzjz, h_jzphi],
        [h_qphi, h_pphi, h_jzphi, h_phiphi],
    ])
}

/// Determinant of the Hessian at the poles `(q, p, jz) = (0, 0, +-1)` as a
/// function of the (indeterminate) angle `phi_s`; finite limit of the
/// otherwise singular entries. In the symmetric Tavis-Cummings case
/// (`xi = 0`, `eta_x = eta_y`) it reduces to `gamma^4`.
pub fn pole_determinant<F: Real>(params: &ModelParams<F>, phi_s: F) -> F {
    let (c, sn) = (phi_s.cos(), phi_s.sin());
    let two = lit::<F>(2.0);
    let sin2 = two * sn * c;
    let cos2 = c * c - sn * sn;
    let op2 = (F::one() + params.xi) * (F::one() + params.xi);
    let om2 = (F::one() - params.xi) * (F::one() - params.xi);
    let dxy = params.eta_x - params.eta_y;
    let g2 = params.gamma * params.gamma;
    -params.omega * params.omega * dxy * dxy * sin2 * sin2
        + params.omega
            * g2
            * dxy
            * ((op2 * c * c + om2 * sn * sn) * cos2 - lit::<F>(4.0) * params.xi * sin2 * sin2)
        + g2 * g2 * om2 * op2
}

/// Scaled pole energies `epsilon_{+-} = +-1 + eta_z / (2 omega0)`,
/// independent of `eta_x`, `eta_y`.
pub fn pole_energy<F: Real>(params: &ModelParams<F>, north: bool) -> F {
    let shift = params.eta_z / (lit::<F>(2.0) * params.omega0);
    if north {
        F::one() + shift
    } else {
        -F::one() + shift
    }
}

/// `(jz, phi) -> (u, v)`: `u = arccos(-jz) cos phi`, `v = arccos(-jz) sin phi`.
pub fn to_surface<F: Real>(jz: F, phi: F) -> (F, F) {
    let theta = (-jz).min(F::one()).max(-F::one()).acos();
    (theta * phi.cos(), theta * phi.sin())
}

/// `(u, v) -> (jz, phi)`: `jz = -cos sqrt(u^2 + v^2)`; `phi = atan2(v, u)`
/// normalized to `[0, 2*pi)` (zero at the pole where it is indeterminate).
pub fn from_surface<F: Real>(u: F, v: F) -> (F, F) {
    let theta = (u * u + v * v).sqrt();
    let jz = -theta.cos();
    if theta == F::zero() {
        return (jz, F::zero());
    }
    (jz, crate::params::normalize_angle(v.atan2(u)))
}

/// `sin(theta)/theta` with a series fallback near zero.
#[inline]
fn sinc<F: Real>(theta: F) -> F {
    if theta.abs() < lit(1e-6) {
        let t2 = theta * theta;
        F::one() - t2 / lit::<F>(6.0) + t2 * t2 / lit::<F>(120.0)
    } else {
        theta.sin() / theta
    }
}

/// `(cos(theta) - sinc(theta)) / theta^2` with a series fallback near zero.
#[inline]
fn sinc_slope<F: Real>(theta: F) -> F {
    if theta.abs() < lit(1e-4) {
        let t2 = theta * theta;
        -F::one() / lit::<F>(3.0) + t2 / lit::<F>(30.0)
    } else {
        (theta.cos() - sinc(theta)) / (theta * theta)
    }
}

/// Boson-eliminated energy surface
/// `epsilon(u, v) = sinc^2(theta)/2 [ u^2 (eta_x/omega0 - f_+)
///   + v^2 (eta_y/omega0 - f_-) ] - cos theta (1 - eta_z cos theta / (2 omega0))`
/// with `theta = sqrt(u^2 + v^2)`; the `(0,0)` singularity is removable and
/// evaluates to the south-pole energy.
pub fn surface_energy<F: Real>(params: &ModelParams<F>, u: F, v: F) -> F {
    let theta = (u * u + v * v).sqrt();
    let sc = sinc(theta);
    let half = lit::<F>(0.5);
    let ax = params.eta_x / params.omega0 - params.f_plus();
    let ay = params.eta_y / params.omega0 - params.f_minus();
    let ct = theta.cos();
    half * sc * sc * (u * u * ax + v * v * ay)
        - ct * (F::one() - params.eta_z / (lit::<F>(2.0) * params.omega0) * ct)
}

/// Full surface point (coordinates plus energy).
pub fn surface_point<F: Real>(params: &ModelParams<F>, u: F, v: F) -> SurfacePoint<F> {
    SurfacePoint { u, v, epsilon: surface_energy(params, u, v) }
}

/// Which pole a chart is centered on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pole {
    South,
    North,
}

/// Unscaled energy `H(q, p, u, v)` in the pole chart: `jz = -cos theta`
/// (south) or `jz = +cos theta` (north), `theta = sqrt(u^2 + v^2)`, and the
/// boson variables kept explicit. Regular everywhere on the chart.
pub fn chart_energy<F: Real>(params: &ModelParams<F>, pole: Pole, z: &[F; 4]) -> F {
    let [q, p, u, v] = *z;
    let theta = (u * u + v * v).sqrt();
    let sc = sinc(theta);
    let ct = theta.cos();
    let sigma = match pole {
        Pole::South => F::one(),
        Pole::North => -F::one(),
    };
    let half = lit::<F>(0.5);
    half * params.omega * (q * q + p * p) - sigma * params.omega0 * ct
        + half * params.eta_z * ct * ct
        + half * sc * sc * (params.eta_x * u * u + params.eta_y * v * v)
        + params.gamma
            * sc
            * ((F::one() + params.xi) * q * u - (F::one() - params.xi) * p * v)
}

/// Analytic gradient of [`chart_energy`] with respect to `(q, p, u, v)`.
/// Vanishes identically at the chart origin (the pole itself).
pub fn chart_gradient<F: Real>(params: &ModelParams<F>, pole: Pole, z: &[F; 4]) -> [F; 4] {
    let [q, p, u, v] = *z;
    let theta2 = u * u + v * v;
    let theta = theta2.sqrt();
    let sc = sinc(theta);
    let k = sinc_slope(theta); // d(sinc)/du = k * u, d(sinc)/dv = k * v
    let ct = theta.cos();
    let sigma = match pole {
        Pole::South => F::one(),
        Pole::North => -F::one(),
    };
    let op = F::one() + params.xi;
    let om = F::one() - params.xi;
    let couple = op * q * u - om * p * v;
    // d(cos theta)/du = -sinc(theta) * u; d(ct^2)/du = -2 ct sc u.
    let spin_radial = (sigma * params.omega0 - params.eta_z * ct) * sc;
    let quad = params.eta_x * u * u + params.eta_y * v * v;
    let g_q = params.omega * q + params.gamma * sc * op * u;
    let g_p = params.omega * p - params.gamma * sc * om * v;
    let g_u =
        spin_radial * u + sc * k * u * quad + sc * sc * params.eta_x * u
            + params.gamma * (k * u * couple + sc * op * q);
    let g_v =
        spin_radial * v + sc * k * v * quad + sc * sc * params.eta_y * v
            + params.gamma * (k * v * couple - sc * om * p);
    [g_q, g_p, g_u, g_v]
}

/// The two 2x2 blocks of the quadratic expansion of [`chart_energy`] at the
/// pole: `(q, u)`-block and `(p, v)`-block. Their four eigenvalues are the
/// pole Hessian spectrum; the Schur complements
/// `+-omega0 (1 -+ f_x)`-style scalars give the reduced surface curvature.
pub fn pole_hessian_blocks<F: Real>(
    params: &ModelParams<F>,
    pole: Pole,
) -> ([[F; 2]; 2], [[F; 2]; 2]) {
    let op = F::one() + params.xi;
    let om = F::one() - params.xi;
    let (du, dv) = match pole {
        Pole::South => (
            params.omega0 - params.delta_zx(),
            params.omega0 - params.delta_zy(),
        ),
        Pole::North => (
            -(params.omega0 + params.delta_zx()),
            -(params.omega0 + params.delta_zy()),
        ),
    };
    let cu = params.gamma * op;
    let cv = -params.gamma * om;
    ([[params.omega, cu], [cu, du]], [[params.omega, cv], [cv, dv]])
}
