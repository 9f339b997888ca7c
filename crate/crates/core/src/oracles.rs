//! Brute-force oracles: independent of the closed forms, used by the test
//! suite and the `validate` command to cross-check analytic results.

use crate::params::ModelParams;

pub type Params = ModelParams<f64>;

/// Scaled energy minimized exactly over the boson quadratures at fixed
/// `(jz, phi)` (the quadratic `(q, p)` part has an explicit minimum).
pub fn boson_min_energy(params: &Params, jz: f64, phi: f64) -> f64 {
    let s2 = (1.0 - jz * jz).max(0.0);
    let (c, sn) = (phi.cos(), phi.sin());
    let op = params.gamma * (1.0 + params.xi) * c;
    let om = params.gamma * (1.0 - params.xi) * sn;
    let spin = jz * (params.omega0 + params.eta_z * jz / 2.0)
        + s2 * (params.eta_x * c * c + params.eta_y * sn * sn) / 2.0;
    (spin - s2 * (op * op + om * om) / (2.0 * params.omega)) / params.omega0
}

/// Global minimum of the scaled classical energy by exhaustive `(jz, phi)`
/// grid search followed by iterative box shrinking. Accurate to well below
/// `1e-6` in energy (the surface is quadratic around its minima).
pub fn grid_min_energy(params: &Params) -> f64 {
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let (n_jz, n_phi) = (401, 401);
    for i in 0..n_jz {
        let jz = -1.0 + 2.0 * i as f64 / (n_jz - 1) as f64;
        for k in 0..n_phi {
            let phi = std::f64::consts::TAU * k as f64 / n_phi as f64;
            let e = boson_min_energy(params, jz, phi);
            if e < best.0 {
                best = (e, jz, phi);
            }
        }
    }
    // Shrinking local refinement around the best vertex.
    let mut half_jz = 2.0 / (n_jz - 1) as f64;
    let mut half_phi = std::f64::consts::TAU / n_phi as f64;
    for _ in 0..14 {
        let center = best;
        for i in 0..21 {
            let jz = (center.1 - half_jz + 2.0 * half_jz * i as f64 / 20.0).clamp(-1.0, 1.0);
            for k in 0..21 {
                let phi = center.2 - half_phi + 2.0 * half_phi * k as f64 / 20.0;
                let e = boson_min_energy(params, jz, phi);
                if e < best.0 {
                    best = (e, jz, phi);
                }
            }
        }
        half_jz /= 5.0;
        half_phi /= 5.0;
    }
    best.0
}

/// Entrywise symmetric finite-difference Hessian of a scalar function of
/// four variables (step `h`, central second differences).
pub fn fd_hessian4(f: impl Fn(&[f64; 4]) -> f64, x: &[f64; 4], h: f64) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    let f0 = f(x);
    for i in 0..4 {
        for k in i..4 {
            let v = if i == k {
                let mut xp = *x;
                let mut xm = *x;
                xp[i] += h;
                xm[i] -= h;
                (f(&xp) - 2.0 * f0 + f(&xm)) / (h * h)
            } else {
                let mut xpp = *x;
                let mut xpm = *x;
                let mut xmp = *x;
                let mut xmm = *x;
                xpp[i] += h;
                xpp[k] += h;
                xpm[i] += h;
                xpm[k] -= h;
                xmp[i] -= h;
                xmp[k] += h;
                xmm[i] -= h;
                xmm[k] -= h;
                (f(&xpp) - f(&xpm) - f(&xmp) + f(&xmm)) / (4.0 * h * h)
            };
            out[i][k] = v;
            out[k][i] = v;
        }
    }
    out
}

/// Central-difference gradient with one Richardson extrapolation step.
pub fn fd_gradient4(f: impl Fn(&[f64; 4]) -> f64, x: &[f64; 4], h: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, slot) in out.iter_mut().enumerate() {
        let d = |step: f64| {
            let mut xp = *x;
            let mut xm = *x;
            xp[i] += step;
            xm[i] -= step;
            (f(&xp) - f(&xm)) / (2.0 * step)
        };
        let d1 = d(h);
        let d2 = d(h / 2.0);
        *slot = (4.0 * d2 - d1) / 3.0;
    }
    out
}
