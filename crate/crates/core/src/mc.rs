//! Monte Carlo phase-space-volume oracle for the semiclassical DoS.
//!
//! Independent check of the boson-eliminated quadrature: sample the full
//! four-dimensional phase space uniformly, estimate the cumulative volume
//! `W(eps)` below each energy, and differentiate numerically.

use crate::model::classical_energy;
use crate::params::{ModelParams, PhaseSpacePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};

pub type Params = ModelParams<f64>;

/// Default half-width of the central difference for `dW/deps`.
pub const DEFAULT_DELTA: f64 = 0.015;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct McDos {
    pub epsilon: f64,
    pub nu_scaled: f64,
    /// One binomial standard error of `nu_scaled`.
    pub std_error: f64,
}

/// Radius of the sampling disc in `(q, p)`: outside it the classical energy
/// exceeds `eps_max` for every spin configuration.
pub fn bounding_radius(params: &Params, eps_max: f64) -> f64 {
    // Conservative lower bound -c on the spin part of the unscaled energy.
    let c = params.omega0
        + params.eta_z.abs() / 2.0
        + (params.eta_x.abs() + params.eta_y.abs()) / 2.0;
    let lin = params.gamma * (1.0 + params.xi) * std::f64::consts::SQRT_2;
    let rhs = params.omega0 * eps_max.abs() + c;
    // Positive root of omega/2 r^2 - lin r - rhs = 0, with margin.
    let disc = lin * lin + 2.0 * params.omega * rhs;
    1.5 * (lin + disc.sqrt()) / params.omega + 1.0
}

/// Estimates `omega nu / 2` at each requested energy from `n_samples`
/// uniform phase-space samples (seeded, deterministic). All energies share
/// one sample set: the scaled energies are sorted once and shell counts
/// come from binary searches.
pub fn mc_dos(
    params: &Params,
    energies: &[f64],
    n_samples: usize,
    delta: f64,
    seed: u64,
) -> Vec<McDos> {
    let eps_max = energies.iter().fold(0.0f64, |a, &b| a.max(b.abs())) + delta + 1.0;
    let r_box = bounding_radius(params, eps_max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<f64> = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let r = r_box * rng.gen::<f64>().sqrt();
        let th = rng.gen_range(0.0..TAU);
        let x = PhaseSpacePoint {
            q: r * th.cos(),
            p: r * th.sin(),
            jz: rng.gen_range(-1.0..=1.0),
            phi: rng.gen_range(0.0..TAU),
        };
        values.push(classical_energy(params, &x));
    }
    values.sort_by(f64::total_cmp);
    let count_below = |eps: f64| values.partition_point(|&v| v <= eps);

    let v_box = PI * r_box * r_box * 2.0 * TAU;
    // nu_scaled = omega W'(eps) / (2 omega0 (2 pi)^2).
    let pref = params.omega * v_box / (2.0 * params.omega0 * TAU * TAU);
    energies
        .iter()
        .map(|&eps| {
            let dc = count_below(eps + delta) - count_below(eps - delta);
            let p_shell = dc as f64 / n_samples as f64;
            let se = (p_shell * (1.0 - p_shell) / n_samples as f64).sqrt();
            McDos {
                epsilon: eps,
                nu_scaled: pref * p_shell / (2.0 * delta),
                std_error: pref * se / (2.0 * delta),
            }
        })
        .collect()
}
