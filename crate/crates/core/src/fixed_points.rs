//! Enumeration, refinement, and Hessian classification of the stationary
//! points of the classical energy surface.
//!
//! The stationary structure comprises five analytic families: the two poles
//! (always present), the superradiant-x pair (`f_x >= 1`), the
//! superradiant-y pair (`xi < 1`, `f_y >= 1`) or its Dicke-limit deformed
//! counterpart (`xi = 1`, same `f_y >= 1` condition with `f_- = 0`), and the
//! symmetric continuum ring (`xi = 0`, `eta_x = eta_y`, `f_0 >= 1`).

use crate::linalg::{self, LinalgError};
use crate::model::{
    chart_gradient, classical_energy, hessian, pole_energy, pole_hessian_blocks,
    Pole,
};
use crate::params::{ModelParams, PhaseSpacePoint};
use serde::Serialize;
use thiserror::Error;

pub type Params = ModelParams<f64>;
pub type Point = PhaseSpacePoint<f64>;

/// Sample count for the symmetric continuum ring.
pub const N_RING: usize = 64;

/// Newton residual target and iteration cap for refinement.
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: usize = 50;

/// Two coincident branch energies (`|f - 1|` below this) are reported as a
/// single merged point at the pole.
const MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum FixedPointError {
    #[error("Newton refinement did not converge within {NEWTON_MAX_ITER} iterations")]
    NonConvergence,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    PoleSouth,
    PoleNorth,
    SuperradiantX,
    SuperradiantY,
    SymmetricContinuum,
    Deformed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Minimum,
    Maximum,
    Saddle,
    DegenerateContinuum,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPoint {
    pub point: Point,
    /// `phi` is indeterminate at the poles.
    pub phi_indeterminate: bool,
    /// Scaled energy at the point.
    pub epsilon: f64,
    pub family: Family,
    /// Present when two families coincide (branch touching a pole at
    /// `f = 1` exactly).
    pub merged_family: Option<Family>,
    pub classification: Classification,
    /// Eigenvalues of the full 4x4 Hessian (chart blocks at the poles),
    /// ascending.
    pub hessian_eigenvalues: [f64; 4],
    /// Number of negative Hessian eigenvalues (the ESQPT index).
    pub index_r: usize,
    /// Max-norm of the stationarity residual after refinement.
    pub residual: f64,
}

/// Analytic descriptor of the symmetric-continuum ring plus sampled points.
#[derive(Debug, Clone, Serialize)]
pub struct ContinuumRing {
    pub jz: f64,
    pub f: f64,
    pub epsilon: f64,
    pub samples: Vec<FixedPoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointSet {
    /// Discrete stationary points (poles and superradiant/deformed pairs).
    pub points: Vec<FixedPoint>,
    /// The degenerate ring of the symmetric Tavis-Cummings phase, if active.
    pub continuum: Option<ContinuumRing>,
}

impl FixedPointSet {
    /// Global minimum energy over all reported stationary structure.
    pub fn min_epsilon(&self) -> f64 {
        let discrete = self.points.iter().map(|p| p.epsilon).fold(f64::INFINITY, f64::min);
        match &self.continuum {
            Some(ring) => discrete.min(ring.epsilon),
            None => discrete,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriticalCouplings {
    /// Critical coupling of the superradiant-x onset; `0` when
    /// `delta_zx >= omega0` (the phase exists for every coupling).
    pub gamma_c_x: f64,
    /// Critical coupling of the superradiant-y onset; `None` at `xi = 1`
    /// where the deformed condition `delta_zy >= omega0` replaces it.
    pub gamma_c_y: Option<f64>,
    pub f_x: f64,
    pub f_y: f64,
    /// Whether the y-onset precedes the x-onset as `gamma` grows.
    pub order_inverted: bool,
    /// Value of `delta_zy` at which the two critical couplings coincide,
    /// for the given `delta_zx`: `delta_zy* = r delta_zx + omega0 (1 - r)`
    /// with `r = (gamma_+ / gamma_-)^2`. Above it the order is inverted.
    pub crossing_delta_zy: f64,
}

/// Scaled branch energy `-(f + 1/f)/2 + eta_z / (2 omega0)`.
pub fn branch_energy(params: &Params, f: f64) -> f64 {
    -0.5 * (f + 1.0 / f) + params.eta_z / (2.0 * params.omega0)
}

/// Critical couplings for the superradiant onsets, their ordering, and the
/// crossing locus.
pub fn critical_couplings(params: &Params) -> CriticalCouplings {
    let w0 = params.omega0;
    let gamma_c_x = if params.delta_zx() < w0 {
        params.gamma_plus() * (1.0 - params.delta_zx() / w0).sqrt()
    } else {
        0.0
    };
    let gamma_c_y = if params.xi < 1.0 {
        Some(if params.delta_zy() < w0 {
            params.gamma_minus() * (1.0 - params.delta_zy() / w0).sqrt()
        } else {
            0.0
        })
    } else {
        None
    };
    // gamma_c_y < gamma_c_x iff f_y reaches 1 before f_x as gamma grows;
    // equivalently delta_zy exceeds the crossing locus below.
    let r = (params.gamma_plus() / params.gamma_minus()).powi(2);
    let crossing_delta_zy = r * params.delta_zx() + w0 * (1.0 - r);
    let order_inverted = match gamma_c_y {
        Some(gy) => gy < gamma_c_x,
        // Dicke limit: the deformed phase precedes superradiance-x iff its
        // existence condition holds while gamma_c_x > 0.
        None => params.delta_zy() >= w0 && gamma_c_x > 0.0,
    };
    CriticalCouplings {
        gamma_c_x,
        gamma_c_y,
        f_x: params.f_x(),
        f_y: params.f_y(),
        order_inverted,
        crossing_delta_zy,
    }
}

/// Stationary (q, p) quadratures at given `(jz, phi)`.
pub fn stationary_quadratures(params: &Params, jz: f64, phi: f64) -> (f64, f64) {
    let s = (1.0 - jz * jz).max(0.0).sqrt();
    (
        -params.gamma / params.omega * (1.0 + params.xi) * s * phi.cos(),
        params.gamma / params.omega * (1.0 - params.xi) * s * phi.sin(),
    )
}

/// Relative degeneracy threshold for Hessian eigenvalues.
pub fn degeneracy_tol(hessian_inf_norm: f64) -> f64 {
    1e-8 * hessian_inf_norm.max(1.0)
}

fn inf_norm4(m: &[[f64; 4]; 4]) -> f64 {
    m.iter().map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Classification from the two reduced (boson-eliminated) curvatures plus
/// the degeneracy threshold.
fn classify_from_reduced(reduced: [f64; 2], tol: f64) -> (Classification, usize) {
    let neg = reduced.iter().filter(|&&l| l < -tol).count();
    let degenerate = reduced.iter().any(|&l| l.abs() < tol);
    let class = if degenerate {
        Classification::DegenerateContinuum
    } else if neg == 0 {
        Classification::Minimum
    } else if neg == 2 {
        Classification::Maximum
    } else {
        Classification::Saddle
    };
    (class, neg)
}

fn eig2(m: &[[f64; 2]; 2]) -> [f64; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    [tr / 2.0 - disc, tr / 2.0 + disc]
}

/// Classify an interior stationary point from its 4x4 Hessian.
///
/// The boson block is `omega * I`, so by inertia additivity the index equals
/// the index of the Schur complement (the curvature of the boson-eliminated
/// surface); classification uses that reduced 2x2 block.
pub fn classify_interior(
    params: &Params,
    x: &Point,
) -> Result<(Classification, [f64; 4], usize), FixedPointError> {
    let h = hessian(params, x).expect("interior point");
    let mut flat = [0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            flat[i * 4 + j] = h[i][j];
        }
    }
    let eigs = linalg::sym_eigvals(&flat, 4)?;
    let tol = degeneracy_tol(inf_norm4(&h));
    // Schur complement: S - C^T C / omega with C the boson-spin coupling.
    let c = [[h[0][2], h[0][3]], [h[1][2], h[1][3]]];
    let mut reduced = [[0.0; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            reduced[a][b] =
                h[2 + a][2 + b] - (c[0][a] * c[0][b] + c[1][a] * c[1][b]) / params.omega;
        }
    }
    let (class, r) = classify_from_reduced(eig2(&reduced), tol);
    let full_neg = eigs.iter().filter(|&&l| l < -tol).count();
    debug_assert_eq!(full_neg, r, "inertia mismatch between full and reduced Hessian");
    Ok((class, [eigs[0], eigs[1], eigs[2], eigs[3]], r))
}

/// Classify a pole from the exact quadratic expansion in the `(q, p, u, v)`
/// chart: eigenvalues of the two 2x2 blocks, reduced curvatures via Schur
/// complement on each block.
pub fn classify_pole(params: &Params, pole: Pole) -> (Classification, [f64; 4], usize) {
    let (bq, bp) = pole_hessian_blocks(params, pole);
    let e1 = eig2(&bq);
    let e2 = eig2(&bp);
    let mut eigs = [e1[0], e1[1], e2[0], e2[1]];
    eigs.sort_by(f64::total_cmp);
    let norm = [&bq, &bp]
        .iter()
        .map(|b| (b[0][0].abs() + b[0][1].abs()).max(b[1][0].abs() + b[1][1].abs()))
        .fold(0.0, f64::max);
    let tol = degeneracy_tol(norm);
    let reduced = [
        bq[1][1] - bq[0][1] * bq[0][1] / params.omega,
        bp[1][1] - bp[0][1] * bp[0][1] / params.omega,
    ];
    let (class, r) = classify_from_reduced(reduced, tol);
    (class, eigs, r)
}

/// Newton-refines a stationary-point guess in the pole chart whose origin is
/// nearest, so the iteration is regular even at `|jz| = 1`. Returns the
/// refined point and the max-norm residual of the chart gradient.
pub fn refine(params: &Params, guess: &Point) -> Result<(Point, f64), FixedPointError> {
    let pole = if guess.jz <= 0.0 { Pole::South } else { Pole::North };
    let theta = match pole {
        Pole::South => (-guess.jz).clamp(-1.0, 1.0).acos(),
        Pole::North => guess.jz.clamp(-1.0, 1.0).acos(),
    };
    let mut z = [guess.q, guess.p, theta * guess.phi.cos(), theta * guess.phi.sin()];
    let mut residual = f64::INFINITY;
    for _ in 0..NEWTON_MAX_ITER {
        let g = chart_gradient(params, pole, &z);
        residual = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if residual < NEWTON_TOL {
            break;
        }
        // Finite-difference Jacobian of the analytic gradient; the residual
        // itself stays analytic, so the iteration still converges to
        // gradient-level accuracy.
        let h = 1e-7;
        let mut jac = [[0.0; 4]; 4];
        for col in 0..4 {
            let mut zp = z;
            let mut zm = z;
            zp[col] += h;
            zm[col] -= h;
            let gp = chart_gradient(params, pole, &zp);
            let gm = chart_gradient(params, pole, &zm);
            for row in 0..4 {
                jac[row][col] = (gp[row] - gm[row]) / (2.0 * h);
            }
        }
        let rhs = [-g[0], -g[1], -g[2], -g[3]];
        let step = linalg::solve4(&jac, &rhs)?;
        for k in 0..4 {
            z[k] += step[k];
        }
    }
    if residual >= NEWTON_TOL {
        return Err(FixedPointError::NonConvergence);
    }
    let (u, v) = (z[2], z[3]);
    let theta = (u * u + v * v).sqrt();
    let jz = match pole {
        Pole::South => -theta.cos(),
        Pole::North => theta.cos(),
    };
    let phi = if theta == 0.0 { 0.0 } else { crate::params::normalize_angle(v.atan2(u)) };
    Ok((Point { q: z[0], p: z[1], jz, phi }, residual))
}

fn make_pole_point(params: &Params, pole: Pole, merged_family: Option<Family>) -> FixedPoint {
    let (class, eigs, r) = classify_pole(params, pole);
    let (jz, family) = match pole {
        Pole::South => (-1.0, Family::PoleSouth),
        Pole::North => (1.0, Family::PoleNorth),
    };
    FixedPoint {
        point: Point { q: 0.0, p: 0.0, jz, phi: 0.0 },
        phi_indeterminate: true,
        epsilon: pole_energy(params, pole == Pole::North),
        family,
        merged_family,
        classification: class,
        hessian_eigenvalues: eigs,
        index_r: r,
        // The chart gradient vanishes identically at the origin.
        residual: 0.0,
    }
}

fn make_branch_point(
    params: &Params,
    family: Family,
    f: f64,
    phi: f64,
) -> Result<FixedPoint, FixedPointError> {
    let jz = -1.0 / f;
    let (q, p) = stationary_quadratures(params, jz, phi);
    let seed = Point { q, p, jz, phi: crate::params::normalize_angle(phi) };
    let (point, residual) = refine(params, &seed)?;
    let (class, eigs, r) = classify_interior(params, &point)?;
    Ok(FixedPoint {
        point,
        phi_indeterminate: false,
        epsilon: classical_energy(params, &point),
        family,
        merged_family: None,
        classification: class,
        hessian_eigenvalues: eigs,
        index_r: r,
        residual,
    })
}

/// Whether the symmetric Tavis-Cummings continuum is active.
pub fn symmetric_continuum_active(params: &Params) -> bool {
    params.xi == 0.0 && params.eta_x == params.eta_y && params.f_x() >= 1.0
}

/// Enumerates the full stationary structure for the given parameters.
pub fn enumerate_fixed_points(params: &Params) -> Result<FixedPointSet, FixedPointError> {
    let f_x = params.f_x();
    let f_y = params.f_y();
    let mut points = Vec::new();
    let mut continuum = None;

    let symmetric = symmetric_continuum_active(params);
    let x_merged = (f_x - 1.0).abs() <= MERGE_TOL;
    let y_merged = (f_y - 1.0).abs() <= MERGE_TOL;
    let y_family = if params.xi < 1.0 { Family::SuperradiantY } else { Family::Deformed };

    let south_merge = if symmetric && x_merged {
        Some(Family::SymmetricContinuum)
    } else if x_merged && f_x >= 1.0 - MERGE_TOL {
        Some(Family::SuperradiantX)
    } else if y_merged && f_y >= 1.0 - MERGE_TOL {
        Some(y_family)
    } else {
        None
    };
    points.push(make_pole_point(params, Pole::South, south_merge));
    points.push(make_pole_point(params, Pole::North, None));

    if symmetric {
        if !x_merged {
            let f = f_x;
            let jz = -1.0 / f;
            let epsilon = branch_energy(params, f);
            let mut samples = Vec::with_capacity(N_RING);
            for k in 0..N_RING {
                let phi = std::f64::consts::TAU * k as f64 / N_RING as f64;
                let (q, p) = stationary_quadratures(params, jz, phi);
                let point = Point { q, p, jz, phi };
                let (class, eigs, r) = classify_interior(params, &point)?;
                samples.push(FixedPoint {
                    point,
                    phi_indeterminate: false,
                    epsilon: classical_energy(params, &point),
                    family: Family::SymmetricContinuum,
                    merged_family: None,
                    classification: class,
                    hessian_eigenvalues: eigs,
                    index_r: r,
                    residual: 0.0,
                });
            }
            continuum = Some(ContinuumRing { jz, f, epsilon, samples });
        }
    } else {
        if f_x >= 1.0 && !x_merged {
            for phi in [0.0, std::f64::consts::PI] {
                points.push(make_branch_point(params, Family::SuperradiantX, f_x, phi)?);
            }
        }
        if f_y >= 1.0 && !y_merged {
            for phi in [std::f64::consts::FRAC_PI_2, 1.5 * std::f64::consts::PI] {
                points.push(make_branch_point(params, y_family, f_y, phi)?);
            }
        }
    }
    Ok(FixedPointSet { points, continuum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::hamilton_rhs;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn base() -> Params {
        ModelParams::resonant()
    }

    #[test]
    fn critical_couplings_examples() {
        // Standard TC and Dicke critical couplings at resonance.
        let tc = critical_couplings(&ModelParams { gamma: 0.3, ..base() });
        assert_abs_diff_eq!(tc.gamma_c_x, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(tc.gamma_c_y.unwrap(), 1.0, epsilon = 1e-12);
        let dicke = critical_couplings(&ModelParams { xi: 1.0, ..base() });
        assert_abs_diff_eq!(dicke.gamma_c_x, 0.5, epsilon = 1e-12);
        assert!(dicke.gamma_c_y.is_none());
        // delta_zx = omega0 drives gamma_c_x to zero.
        let zero = critical_couplings(&ModelParams { eta_z: 1.0, ..base() });
        assert_eq!(zero.gamma_c_x, 0.0);
    }

    #[test]
    fn crossing_locus_matches_direct_comparison() {
        // The locus is defined by gamma_c_x = gamma_c_y; check by direct
        // evaluation of the two couplings on either side.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let params = ModelParams {
                omega: rng.gen_range(0.5..2.0),
                omega0: rng.gen_range(0.5..2.0),
                gamma: 0.1,
                xi: rng.gen_range(0.0..0.95),
                eta_x: rng.gen_range(-1.0..1.0),
                eta_y: 0.0,
                eta_z: rng.gen_range(-1.0..1.0),
                ..base()
            };
            let cc = critical_couplings(&params);
            // Place eta_y so that delta_zy sits exactly on the locus;
            // both couplings must then agree.
            let eta_y = params.eta_z - cc.crossing_delta_zy;
            let on_locus = ModelParams { eta_y, ..params };
            let cc2 = critical_couplings(&on_locus);
            if cc2.gamma_c_x > 0.0 {
                assert_abs_diff_eq!(cc2.gamma_c_x, cc2.gamma_c_y.unwrap(), epsilon = 1e-9);
            }
            // Slightly above the locus the order must invert.
            let above = ModelParams { eta_y: eta_y - 0.05, ..params };
            let cc3 = critical_couplings(&above);
            if cc3.gamma_c_x > 0.0 {
                assert!(cc3.gamma_c_y.unwrap() < cc3.gamma_c_x);
                assert!(cc3.order_inverted);
            }
        }
    }

    #[test]
    fn normal_phase_two_points() {
        let params = ModelParams { xi: 1.0, gamma: 0.4, ..base() };
        let set = enumerate_fixed_points(&params).unwrap();
        assert_eq!(set.points.len(), 2);
        assert!(set.continuum.is_none());
        let south = &set.points[0];
        assert_eq!(south.family, Family::PoleSouth);
        assert_eq!(south.classification, Classification::Minimum);
        assert_eq!(south.index_r, 0);
    }

    #[test]
    fn dicke_superradiant_four_points() {
        let params = ModelParams { xi: 1.0, gamma: 1.0, ..base() };
        let set = enumerate_fixed_points(&params).unwrap();
        assert_eq!(set.points.len(), 4);
        let south = set.points.iter().find(|p| p.family == Family::PoleSouth).unwrap();
        assert_eq!(south.classification, Classification::Saddle);
        let xs: Vec<_> =
            set.points.iter().filter(|p| p.family == Family::SuperradiantX).collect();
        assert_eq!(xs.len(), 2);
        for x in &xs {
            assert_abs_diff_eq!(x.point.jz, -0.25, epsilon = 1e-12);
            assert_abs_diff_eq!(x.epsilon, -2.125, epsilon = 1e-12);
            assert_eq!(x.classification, Classification::Minimum);
            assert!(x.residual < NEWTON_TOL);
        }
    }

    #[test]
    fn symmetric_continuum_ring() {
        let params = ModelParams { gamma: 1.5, eta_x: 0.5, eta_y: 0.5, ..base() };
        let set = enumerate_fixed_points(&params).unwrap();
        assert_eq!(set.points.len(), 2);
        let ring = set.continuum.as_ref().unwrap();
        assert_abs_diff_eq!(ring.f, 1.75, epsilon = 1e-12);
        assert_abs_diff_eq!(ring.jz, -1.0 / 1.75, epsilon = 1e-12);
        assert_eq!(ring.samples.len(), N_RING);
        for s in &ring.samples {
            assert_eq!(s.classification, Classification::DegenerateContinuum);
            assert_abs_diff_eq!(s.epsilon, ring.epsilon, epsilon = 1e-10);
            let rhs = hamilton_rhs(&params, &s.point).unwrap();
            for c in rhs {
                assert_abs_diff_eq!(c, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn tc_superposition_six_points() {
        // Both pairs present at xi = 0 with imbalanced interactions.
        let params = ModelParams { gamma: 1.6, eta_y: 0.5, ..base() };
        // f_x = 0 + 2.56, f_y = -0.5 + 2.56.
        let set = enumerate_fixed_points(&params).unwrap();
        assert_eq!(set.points.len(), 6);
        let e_sx = set
            .points
            .iter()
            .filter(|p| p.family == Family::SuperradiantX)
            .map(|p| p.epsilon)
            .next()
            .unwrap();
        let e_sy = set
            .points
            .iter()
            .filter(|p| p.family == Family::SuperradiantY)
            .map(|p| p.epsilon)
            .next()
            .unwrap();
        let e_minus = pole_energy(&params, false);
        let e_plus = pole_energy(&params, true);
        assert!(e_sx < e_sy && e_sy <= e_minus && e_minus <= e_plus);
        // Subdominant pair is a saddle, dominant pair a minimum.
        for p in &set.points {
            match p.family {
                Family::SuperradiantX => assert_eq!(p.classification, Classification::Minimum),
                Family::SuperradiantY => assert_eq!(p.classification, Classification::Saddle),
                _ => {}
            }
        }
    }

    #[test]
    fn stationarity_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..100 {
            let params = ModelParams {
                omega: rng.gen_range(0.5..2.0),
                omega0: rng.gen_range(0.5..2.0),
                gamma: rng.gen_range(0.0..2.5),
                xi: rng.gen_range(0.0..=1.0),
                eta_x: rng.gen_range(-1.5..1.5),
                eta_y: rng.gen_range(-1.5..1.5),
                eta_z: rng.gen_range(-1.5..1.5),
            };
            let set = enumerate_fixed_points(&params).unwrap();
            for p in &set.points {
                assert!(p.residual < 1e-9);
                if p.point.jz.abs() < 1.0 - crate::POLE_GUARD {
                    let rhs = hamilton_rhs(&params, &p.point).unwrap();
                    let norm = rhs.iter().map(|x| x * x).sum::<f64>().sqrt();
                    assert!(norm < 1e-9, "rhs residual {norm} for {:?}", p.family);
                }
            }
        }
    }

    #[test]
    fn refine_recovers_from_perturbed_seed() {
        let params = ModelParams { xi: 1.0, gamma: 1.0, ..base() };
        let (q, p) = stationary_quadratures(&params, -0.25, 0.0);
        let seed = Point { q: q + 1e-3, p: p - 1e-3, jz: -0.25 + 1e-3, phi: 1e-3 };
        let (refined, residual) = refine(&params, &seed).unwrap();
        assert!(residual < NEWTON_TOL);
        assert_abs_diff_eq!(refined.jz, -0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(refined.q, q, epsilon = 1e-10);
    }

    #[test]
    fn refine_near_pole_boundary() {
        // Normal phase: the only stationary point near the south pole is the
        // pole itself; a guess at the pole-guard boundary must refine there
        // without error.
        let params = ModelParams { gamma: 0.5, ..base() };
        let seed = Point { q: 1e-5, p: 0.0, jz: -1.0 + crate::POLE_GUARD, phi: 0.3 };
        let (refined, residual) = refine(&params, &seed).unwrap();
        assert!(residual < NEWTON_TOL);
        assert_abs_diff_eq!(refined.jz, -1.0, epsilon = 1e-6);
    }

    #[test]
    fn merged_point_at_exact_critical_coupling() {
        let params = ModelParams { gamma: 1.0, ..base() }; // f_0x = f_0y = 1 exactly
        let set = enumerate_fixed_points(&params).unwrap();
        assert_eq!(set.points.len(), 2);
        let south = &set.points[0];
        assert_eq!(south.family, Family::PoleSouth);
        assert!(south.merged_family.is_some());
    }

    #[test]
    fn swap_symmetry_at_tc() {
        // eta_x <-> eta_y maps the set onto itself with phi -> phi +- pi/2
        // and quadrature exchange; energies unchanged.
        let params = ModelParams { gamma: 1.7, eta_x: 0.3, eta_y: 0.8, eta_z: 0.2, ..base() };
        let swapped = ModelParams { eta_x: 0.8, eta_y: 0.3, ..params };
        let a = enumerate_fixed_points(&params).unwrap();
        let b = enumerate_fixed_points(&swapped).unwrap();
        assert_eq!(a.points.len(), b.points.len());
        let mut ea: Vec<f64> = a.points.iter().map(|p| p.epsilon).collect();
        let mut eb: Vec<f64> = b.points.iter().map(|p| p.epsilon).collect();
        ea.sort_by(f64::total_cmp);
        eb.sort_by(f64::total_cmp);
        for (x, y) in ea.iter().zip(&eb) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-10);
        }
        // x-pair of the original matches the y-pair of the swapped set
        // after the quarter turn.
        let ax = a.points.iter().find(|p| p.family == Family::SuperradiantX).unwrap();
        let by = b.points.iter().find(|p| p.family == Family::SuperradiantY).unwrap();
        assert_abs_diff_eq!(ax.point.jz, by.point.jz, epsilon = 1e-10);
        assert_abs_diff_eq!(ax.point.q.abs(), by.point.p.abs(), epsilon = 1e-10);
    }

    #[test]
    fn dicke_six_point_exception() {
        // At xi = 1 both the x-pair and the deformed pair can coexist for
        // large enough eta_z; the enumeration reports all six.
        let params = ModelParams { xi: 1.0, gamma: 1.0, eta_z: 2.0, ..base() };
        // f_x = 2 + 4 = 6, f_y = 2.
        let set = enumerate_fixed_points(&params).unwrap();
        assert_eq!(set.points.len(), 6);
        let n_def = set.points.iter().filter(|p| p.family == Family::Deformed).count();
        assert_eq!(n_def, 2);
    }
}
