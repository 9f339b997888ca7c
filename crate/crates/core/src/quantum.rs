//! Finite-size exact diagonalization oracle.
//!
//! Basis `|n> (x) |j, m>` with `N = 2j` qubits in the symmetric sector;
//! the Hamiltonian is real symmetric and banded (`kd = 2j + 2`): the
//! light-matter terms couple `(n, m) -> (n + 1, m -+ 1)` and the
//! `Jx^2 - Jy^2` interaction couples `m -> m + 2`.

use crate::linalg::{tridiag_eigvals, BandedSym, LinalgError};
use crate::params::ModelParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub type Params = ModelParams<f64>;

/// Hard cap on the basis dimension.
pub const MAX_DIM: usize = 200_000;

/// Dense full-spectrum solves below this dimension; Lanczos above (for
/// extremal eigenvalues).
const DENSE_LIMIT: usize = 4000;

/// Ground-state convergence threshold under truncation growth, in scaled
/// energy units.
const GS_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("basis dimension {0} exceeds the {MAX_DIM} cap")]
    DimensionTooLarge(usize),
    #[error("j must be a positive half-integer, got {0}")]
    InvalidJ(f64),
    #[error("ground state not converged in n_max within the dimension cap")]
    TruncationNotConverged,
    #[error("operation requires xi = 0 and eta_x = eta_y")]
    PreconditionViolated,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy)]
pub struct QuantumModel {
    pub params: Params,
    /// Pseudospin length `j = N/2` (positive half-integer).
    pub j: f64,
    /// Boson truncation: photon numbers `0..=n_max`.
    pub n_max: usize,
}

impl QuantumModel {
    pub fn new(params: Params, j: f64, n_max: usize) -> Result<Self, QuantumError> {
        let two_j = 2.0 * j;
        if !(j > 0.0 && two_j.fract() == 0.0) {
            return Err(QuantumError::InvalidJ(j));
        }
        Ok(Self { params, j, n_max })
    }

    /// Initial truncation heuristic: superradiant photon occupation scales
    /// like `j` times the squared stationary quadratures.
    pub fn heuristic_n_max(params: &Params, j: f64) -> usize {
        let scale = 1.0f64.max(params.f_plus()).max(params.f_x()).max(params.f_y());
        (4.0 * j * scale).ceil() as usize
    }

    pub fn dim(&self) -> usize {
        (self.n_max + 1) * spin_dim(self.j)
    }
}

fn spin_dim(j: f64) -> usize {
    (2.0 * j).round() as usize + 1
}

/// `sqrt(j(j+1) - m(m+1))`, the `J+` matrix element from `m`.
fn c_plus(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// Builds the banded symmetric Hamiltonian in units of the bare energies
/// (not scaled by `omega0 j`).
pub fn build_matrix(model: &QuantumModel) -> Result<BandedSym, QuantumError> {
    let j = model.j;
    let sd = spin_dim(j);
    let dim = (model.n_max + 1) * sd;
    if dim > MAX_DIM {
        return Err(QuantumError::DimensionTooLarge(dim));
    }
    let p = &model.params;
    let n_qubits = 2.0 * j;
    let g = p.gamma / n_qubits.sqrt();
    // Couplings reach (n + 1, m -+ 1) (offsets sd -+ 1) and (n, m + 2).
    let kd = (sd + 1).min(dim.saturating_sub(1));
    let mut h = BandedSym::zeros(dim, kd);
    let idx = |n: usize, mi: usize| n * sd + mi;
    let jj = j * (j + 1.0);
    for n in 0..=model.n_max {
        for mi in 0..sd {
            let m = mi as f64 - j;
            let row = idx(n, mi);
            // Diagonal: boson + splitting + Jz^2 + (Jx^2 + Jy^2) part.
            let diag = p.omega * n as f64
                + p.omega0 * m
                + (p.eta_z * m * m + 0.5 * (p.eta_x + p.eta_y) * (jj - m * m)) / n_qubits;
            h.add(row, row, diag);
            // (eta_x - eta_y)/(4N) (J+^2 + J-^2): m -> m + 2.
            if mi + 2 < sd {
                let v = (p.eta_x - p.eta_y) / (4.0 * n_qubits) * c_plus(j, m) * c_plus(j, m + 1.0);
                let col = idx(n, mi + 2);
                if v != 0.0 && col.max(row) - col.min(row) <= kd {
                    h.add(col.max(row), col.min(row), v);
                }
            }
            if n < model.n_max {
                let root = (n as f64 + 1.0).sqrt();
                // a' J-: (n, m) -> (n + 1, m - 1).
                if mi > 0 {
                    let v = g * root * c_plus(j, m - 1.0);
                    h.add(idx(n + 1, mi - 1), row, v);
                }
                // xi a' J+: (n, m) -> (n + 1, m + 1).
                if mi + 1 < sd {
                    let v = p.xi * g * root * c_plus(j, m);
                    h.add(idx(n + 1, mi + 1), row, v);
                }
            }
        }
    }
    Ok(h)
}

/// Lowest eigenvalue by Lanczos with full reorthogonalization
/// (deterministic seeded start vector).
fn lanczos_smallest(h: &BandedSym, max_iter: usize) -> Result<f64, QuantumError> {
    let n = h.n;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let mut basis: Vec<Vec<f64>> = vec![v.clone()];
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut prev_ritz = f64::INFINITY;
    for it in 0..max_iter.min(n) {
        h.matvec(&v, &mut w);
        let alpha: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        alphas.push(alpha);
        // w <- w - alpha v - beta v_prev, then full reorthogonalization.
        for (wi, vi) in w.iter_mut().zip(&v) {
            *wi -= alpha * vi;
        }
        if let Some(beta) = betas.last() {
            let prev = &basis[basis.len() - 2];
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= beta * pi;
            }
        }
        for b in &basis {
            let proj: f64 = b.iter().zip(&w).map(|(a, c)| a * c).sum();
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= proj * bi;
            }
        }
        let beta = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if beta < 1e-14 {
            break;
        }
        if it % 10 == 9 || it + 1 == max_iter.min(n) {
            let ritz = tridiag_eigvals(&alphas, &betas)?[0];
            if (ritz - prev_ritz).abs() < 1e-11 {
                return Ok(ritz);
            }
            prev_ritz = ritz;
        }
        betas.push(beta);
        v = w.iter().map(|x| x / beta).collect();
        basis.push(v.clone());
    }
    Ok(tridiag_eigvals(&alphas, &betas)?[0])
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    /// Sorted scaled energies `E / (omega0 j)` (lowest block).
    pub eigenvalues_per_j: Vec<f64>,
    pub n_max_used: usize,
    pub converged: bool,
    pub gs_epsilon: f64,
}

fn lowest_eigs(model: &QuantumModel, k: usize) -> Result<Vec<f64>, QuantumError> {
    let h = build_matrix(model)?;
    let scale = model.params.omega0 * model.j;
    if h.n <= DENSE_LIMIT {
        let mut w = h.eigvals()?;
        w.truncate(k);
        Ok(w.into_iter().map(|e| e / scale).collect())
    } else {
        Ok(vec![lanczos_smallest(&h, 400)? / scale])
    }
}

/// Ground state with automatic truncation growth: `n_max` is increased by
/// 25% until the scaled ground-state energy moves less than `1e-8`.
pub fn ground_state(model: &QuantumModel) -> Result<SpectrumResult, QuantumError> {
    let sd = spin_dim(model.j);
    let mut n_max = model.n_max.max(1);
    let mut eigs = lowest_eigs(&QuantumModel { n_max, ..*model }, 50)?;
    loop {
        let next = ((n_max as f64 * 1.25).ceil() as usize).max(n_max + 2);
        if (next + 1) * sd > MAX_DIM {
            return Err(QuantumError::TruncationNotConverged);
        }
        let grown = lowest_eigs(&QuantumModel { n_max: next, ..*model }, 50)?;
        let delta = (grown[0] - eigs[0]).abs();
        let done = delta < GS_TOL;
        n_max = next;
        eigs = grown;
        if done {
            return Ok(SpectrumResult {
                gs_epsilon: eigs[0],
                eigenvalues_per_j: eigs,
                n_max_used: n_max,
                converged: true,
            });
        }
    }
}

/// Full scaled spectrum via the dense banded solver.
pub fn full_spectrum(model: &QuantumModel) -> Result<Vec<f64>, QuantumError> {
    let h = build_matrix(model)?;
    let scale = model.params.omega0 * model.j;
    Ok(h.eigvals()?.into_iter().map(|e| e / scale).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct Histogram {
    pub centers: Vec<f64>,
    /// Counts per unit scaled energy (integrates to the basis dimension).
    pub densities: Vec<f64>,
    pub bin_width: f64,
}

/// Histogram of the scaled spectrum; density units are states per unit
/// `epsilon`, so it integrates to the basis dimension.
pub fn finite_size_dos(model: &QuantumModel, bin_width: f64) -> Result<Histogram, QuantumError> {
    let eigs = full_spectrum(model)?;
    let lo = eigs.first().copied().unwrap_or(0.0);
    let hi = eigs.last().copied().unwrap_or(0.0);
    // Center the first bin on the ground state so that arithmetically
    // spaced spectra (commensurate with the bin width) fall mid-bin rather
    // than on edges.
    let start = lo - 0.5 * bin_width;
    let n_bins = (((hi - start) / bin_width).floor() as usize) + 1;
    let mut counts = vec![0usize; n_bins];
    for e in &eigs {
        let b = (((e - start) / bin_width) as usize).min(n_bins - 1);
        counts[b] += 1;
    }
    Ok(Histogram {
        centers: (0..n_bins).map(|b| lo + b as f64 * bin_width).collect(),
        densities: counts.iter().map(|&c| c as f64 / bin_width).collect(),
        bin_width,
    })
}

/// The semiclassical density corresponding to a per-`j` histogram:
/// `rho(eps) = 2 j^2 (omega0 / omega) * nu_scaled(eps)`.
pub fn semiclassical_density(params: &Params, j: f64, epsilon: f64) -> f64 {
    2.0 * j * j * params.omega0 / params.omega * crate::dos::dos(params, epsilon).nu_scaled
}

fn commutator_norm_with_diag(h: &BandedSym, diag: &[f64]) -> f64 {
    // [H, D] for diagonal D has entries H_ij (D_jj - D_ii); scan the band.
    let mut max = 0.0f64;
    for col in 0..h.n {
        for row in (col + 1)..=(col + h.kd).min(h.n - 1) {
            let v = h.get(row, col);
            if v != 0.0 {
                max = max.max((v * (diag[col] - diag[row])).abs());
            }
        }
    }
    max
}

/// Verifies conservation of the excitation number `Lambda = a'a + Jz + j`
/// in the symmetric Tavis-Cummings regime; returns the max-norm of the
/// commutator band.
pub fn excitation_block_check(model: &QuantumModel) -> Result<f64, QuantumError> {
    let p = &model.params;
    if p.xi != 0.0 || p.eta_x != p.eta_y {
        return Err(QuantumError::PreconditionViolated);
    }
    let h = build_matrix(model)?;
    let sd = spin_dim(model.j);
    let lambda: Vec<f64> =
        (0..h.n).map(|i| (i / sd) as f64 + (i % sd) as f64).collect();
    Ok(commutator_norm_with_diag(&h, &lambda))
}

/// Max-norm of `[H, Pi]` with the parity `Pi = exp(i pi (a'a + Jz + j))`;
/// zero for every parameter set (all terms change `n + m` by 0 or 2).
pub fn parity_check(model: &QuantumModel) -> Result<f64, QuantumError> {
    let h = build_matrix(model)?;
    let sd = spin_dim(model.j);
    let parity: Vec<f64> =
        (0..h.n).map(|i| if (i / sd + i % sd) % 2 == 0 { 1.0 } else { -1.0 }).collect();
    // [H, Pi]_ij = H_ij (pi_j - pi_i).
    Ok(commutator_norm_with_diag(&h, &parity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn base() -> Params {
        ModelParams::resonant()
    }

    #[test]
    fn free_qubit() {
        let model = QuantumModel::new(base(), 0.5, 0).unwrap();
        let h = build_matrix(&model).unwrap();
        let eigs = h.eigvals().unwrap();
        let scale = 0.5;
        assert_abs_diff_eq!(eigs[0] / scale, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eigs[1] / scale, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn diagonal_jz_squared() {
        // j = 1, eta_z = omega0 = 1, N = 2: levels m + m^2/2.
        let model = QuantumModel::new(Params { eta_z: 1.0, ..base() }, 1.0, 0).unwrap();
        let eigs = full_spectrum(&model).unwrap();
        assert_abs_diff_eq!(eigs[0], -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(eigs[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eigs[2], 1.5, epsilon = 1e-14);
    }

    #[test]
    fn parity_conserved() {
        let model =
            QuantumModel::new(Params { xi: 1.0, gamma: 1.0, ..base() }, 5.0, 30).unwrap();
        assert!(parity_check(&model).unwrap() < 1e-12);
        let model = QuantumModel::new(
            Params { xi: 0.4, gamma: 0.8, eta_x: 0.5, eta_y: -0.2, eta_z: 0.3, ..base() },
            2.5,
            20,
        )
        .unwrap();
        assert!(parity_check(&model).unwrap() < 1e-12);
    }

    #[test]
    fn excitation_number_conserved_when_symmetric() {
        let params = Params { gamma: 0.9, eta_x: 0.5, eta_y: 0.5, eta_z: 0.2, ..base() };
        let model = QuantumModel::new(params, 3.0, 25).unwrap();
        assert!(excitation_block_check(&model).unwrap() < 1e-12);
        // Refusals.
        let model =
            QuantumModel::new(Params { eta_x: 0.5, eta_y: 0.4, ..params }, 3.0, 25).unwrap();
        assert!(matches!(excitation_block_check(&model), Err(QuantumError::PreconditionViolated)));
        let model = QuantumModel::new(Params { xi: 0.3, ..params }, 3.0, 25).unwrap();
        assert!(matches!(excitation_block_check(&model), Err(QuantumError::PreconditionViolated)));
    }

    #[test]
    fn gs_matches_classical_in_normal_phase() {
        // gamma below critical: gs -> -1 - O(1/j) corrections.
        let params = Params { gamma: 0.3, ..base() };
        let model = QuantumModel::new(params, 10.0, 40).unwrap();
        let res = ground_state(&model).unwrap();
        assert!(res.converged);
        assert!((res.gs_epsilon + 1.0).abs() < 0.05, "gs {}", res.gs_epsilon);
    }

    #[test]
    fn dicke_gs_approaches_classical() {
        let params = Params { xi: 1.0, gamma: 1.0, ..base() };
        let mut prev_err = f64::INFINITY;
        for j in [5.0, 10.0] {
            let n0 = QuantumModel::heuristic_n_max(&params, j);
            let model = QuantumModel::new(params, j, n0).unwrap();
            let res = ground_state(&model).unwrap();
            let err = (res.gs_epsilon - (-2.125)).abs();
            assert!(err < prev_err, "error not shrinking: {err} vs {prev_err}");
            // The classical value is attained by a coherent product trial
            // state, so it upper-bounds the quantum ground state.
            assert!(res.gs_epsilon <= -2.125 + 1e-9, "variational bound violated");
            prev_err = err;
        }
        assert!(prev_err < 0.1);
    }

    #[test]
    fn eigenvalues_monotone_in_truncation() {
        let params = Params { xi: 1.0, gamma: 1.0, ..base() };
        let small = full_spectrum(&QuantumModel::new(params, 2.0, 20).unwrap()).unwrap();
        let large = full_spectrum(&QuantumModel::new(params, 2.0, 30).unwrap()).unwrap();
        for k in 0..20 {
            assert!(large[k] <= small[k] + 1e-12, "eigenvalue {k} increased");
        }
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let params = Params { xi: 1.0, gamma: 1.0, eta_y: 0.3, eta_z: 0.2, ..base() };
        let model = QuantumModel::new(params, 3.0, 60).unwrap();
        let h = build_matrix(&model).unwrap();
        let dense = h.eigvals().unwrap()[0];
        let lz = lanczos_smallest(&h, 400).unwrap();
        assert_abs_diff_eq!(lz, dense, epsilon = 1e-9);
    }

    #[test]
    fn decoupled_histogram_matches_convolution() {
        let params = base();
        let j = 10.0;
        let model = QuantumModel::new(params, j, 100).unwrap();
        let hist = finite_size_dos(&model, 0.1).unwrap();
        // Analytic: density (omega0 j / omega) * #{m : m/j <= eps} in the
        // untruncated bulk.
        for (c, d) in hist.centers.iter().zip(&hist.densities) {
            if *c < -0.9 || *c > 2.0 {
                continue; // spectrum edges and truncation region
            }
            let m_count = (0..=20).filter(|&mi| (mi as f64 - j) / j <= *c).count() as f64;
            let analytic = j * m_count;
            assert!(
                (d - analytic).abs() <= 0.05 * analytic + j,
                "density {d} vs analytic {analytic} at eps {c}"
            );
        }
    }

    #[test]
    fn dimension_cap_enforced() {
        let model = QuantumModel::new(base(), 100.0, 2000).unwrap();
        assert!(matches!(build_matrix(&model), Err(QuantumError::DimensionTooLarge(_))));
    }
}
