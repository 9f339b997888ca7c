//! Ground-state closed forms, parameter gradients, QPT order classification
//! along parameter paths, and 2D phase-diagram sweeps.

use crate::fixed_points::{branch_energy, symmetric_continuum_active};
use crate::params::ModelParams;
use serde::Serialize;
use thiserror::Error;

pub type Params = ModelParams<f64>;

/// Relative tolerance for discriminating first- from second-order
/// transitions via one-sided path derivatives.
pub const DERIV_TOL: f64 = 1e-6;

/// Step for Richardson-style one-sided differences along parameter paths.
const PATH_STEP: f64 = 1e-4;

/// Two branch functions closer than this count as exactly tied.
const BORDER_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SweepError {
    #[error("grid of {0} cells exceeds the 10^7 limit")]
    GridTooLarge(usize),
    #[error("parameters invalid at a grid cell: {0}")]
    InvalidCell(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseLabel {
    Normal,
    DeformedNormal,
    SuperradiantSymmetric,
    SuperradiantX,
    SuperradiantY,
    Deformed,
    SuperpositionXY,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominant {
    X,
    Y,
    Symmetric,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Phase {
    pub label: PhaseLabel,
    pub dominant: Dominant,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GroundState {
    /// Scaled ground-state energy `-(F + 1/F)/2 + eta_z / (2 omega0)`.
    pub epsilon: f64,
    /// The active scaled function `F = max(1, admissible f_x, f_y)`.
    pub f: f64,
    pub phase: Phase,
    /// Exactly on the first-order x/y border (`f_x = f_y >= 1`).
    pub border: bool,
}

/// Ground state from the closed forms. `F` is the largest admissible branch
/// function; `-(F + 1/F)/2` decreases in `F >= 1`, so the max realizes the
/// energy minimum. Labels at exact boundaries belong to the higher-F side.
pub fn ground_state(params: &Params) -> GroundState {
    let f_x = params.f_x();
    let f_y = params.f_y();
    let x_act = f_x >= 1.0;
    let y_act = f_y >= 1.0;
    let symmetric = symmetric_continuum_active(params);

    // Whether each branch displaces the boson field: the x-branch couples
    // through gamma (1 + xi), the y-branch through gamma (1 - xi). A branch
    // condensing without a boson displacement is a pure spin deformation.
    let x_sr = params.gamma * (1.0 + params.xi) > 0.0;
    let y_sr = params.gamma * (1.0 - params.xi) > 0.0;

    let (f, phase, border) = if symmetric {
        (f_x, Phase { label: PhaseLabel::SuperradiantSymmetric, dominant: Dominant::Symmetric }, false)
    } else if x_act && y_act {
        let border = (f_x - f_y).abs() <= BORDER_TOL;
        // Dominance tie resolves to x by convention.
        let x_dom = f_x >= f_y;
        let label = if x_sr && y_sr {
            PhaseLabel::SuperpositionXY
        } else if x_dom && x_sr {
            PhaseLabel::SuperradiantX
        } else if !x_dom && y_sr {
            PhaseLabel::SuperradiantY
        } else {
            PhaseLabel::Deformed
        };
        let dominant = if x_dom { Dominant::X } else { Dominant::Y };
        (f_x.max(f_y), Phase { label, dominant }, border)
    } else if x_act {
        let label = if x_sr { PhaseLabel::SuperradiantX } else { PhaseLabel::Deformed };
        (f_x, Phase { label, dominant: Dominant::X }, false)
    } else if y_act {
        let label = if y_sr { PhaseLabel::SuperradiantY } else { PhaseLabel::Deformed };
        (f_y, Phase { label, dominant: Dominant::Y }, false)
    } else {
        let label = if params.eta_x == params.eta_y {
            PhaseLabel::Normal
        } else {
            PhaseLabel::DeformedNormal
        };
        (1.0, Phase { label, dominant: Dominant::None }, false)
    };
    GroundState { epsilon: branch_energy(params, f), f, phase, border }
}

/// Which closed-form branch is active for gradient purposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Normal,
    X,
    Y,
}

/// Gradient `(d/dgamma, d/deta_x, d/deta_y, d/deta_z)` of the scaled
/// ground-state energy on a single branch.
fn branch_gradient(params: &Params, branch: Branch) -> [f64; 4] {
    let w0 = params.omega0;
    let normal = [0.0, 0.0, 0.0, 1.0 / (2.0 * w0)];
    let (f, df) = match branch {
        Branch::Normal => return normal,
        Branch::X => {
            let op = 1.0 + params.xi;
            (
                params.f_x(),
                [2.0 * params.gamma * op * op / (params.omega * w0), -1.0 / w0, 0.0, 1.0 / w0],
            )
        }
        Branch::Y => {
            let om = 1.0 - params.xi;
            (
                params.f_y(),
                [2.0 * params.gamma * om * om / (params.omega * w0), 0.0, -1.0 / w0, 1.0 / w0],
            )
        }
    };
    // d/dF of -(F + 1/F)/2 is -(1 - 1/F^2)/2.
    let pref = -0.5 * (1.0 - 1.0 / (f * f));
    [
        pref * df[0] + normal[0],
        pref * df[1] + normal[1],
        pref * df[2] + normal[2],
        pref * df[3] + normal[3],
    ]
}

#[derive(Debug, Clone, Serialize)]
pub enum GsGradient {
    /// Off-boundary gradient of the active branch.
    Interior([f64; 4]),
    /// Exactly on a phase boundary: the gradients of the two adjacent
    /// branches (lower-F side first).
    OnBoundary { lower: [f64; 4], upper: [f64; 4] },
}

/// Parameter gradient of the ground-state energy, with one-sided values on
/// exact boundaries.
pub fn gs_gradient(params: &Params) -> GsGradient {
    let f_x = params.f_x();
    let f_y = params.f_y();
    let x_act = f_x >= 1.0 - BORDER_TOL;
    let y_act = f_y >= 1.0 - BORDER_TOL;
    // Tie between the two superradiant branches (includes the symmetric TC
    // line, where the x/y directional derivatives genuinely differ).
    if x_act && y_act && (f_x - f_y).abs() <= BORDER_TOL {
        return GsGradient::OnBoundary {
            lower: branch_gradient(params, Branch::Y),
            upper: branch_gradient(params, Branch::X),
        };
    }
    let (branch, f) =
        if x_act && (!y_act || f_x >= f_y) { (Branch::X, f_x) } else if y_act { (Branch::Y, f_y) } else { (Branch::Normal, 1.0) };
    if branch != Branch::Normal && (f - 1.0).abs() <= BORDER_TOL {
        return GsGradient::OnBoundary {
            lower: branch_gradient(params, Branch::Normal),
            upper: branch_gradient(params, branch),
        };
    }
    GsGradient::Interior(branch_gradient(params, branch))
}

/// A straight segment in the seven-dimensional parameter space.
#[derive(Debug, Clone)]
pub struct ParamPath {
    pub start: Params,
    pub end: Params,
}

impl ParamPath {
    pub fn at(&self, t: f64) -> Params {
        let l = |a: f64, b: f64| a + t * (b - a);
        Params {
            omega: l(self.start.omega, self.end.omega),
            omega0: l(self.start.omega0, self.end.omega0),
            gamma: l(self.start.gamma, self.end.gamma),
            xi: l(self.start.xi, self.end.xi),
            eta_x: l(self.start.eta_x, self.end.eta_x),
            eta_y: l(self.start.eta_y, self.end.eta_y),
            eta_z: l(self.start.eta_z, self.end.eta_z),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QptEvent {
    /// Path coordinate `t` in `[0, 1]` of the boundary crossing.
    pub t: f64,
    /// Ehrenfest order: 1 = first path derivative of the energy jumps,
    /// 2 = second derivative jumps.
    pub order: u8,
}

/// One-sided first and second derivatives at `t0` from four nodes strictly
/// on one side (`t0 + k*h*dir`, k = 1..=4), via a cubic fit.
fn one_sided_derivs(f: impl Fn(f64) -> f64, t0: f64, h: f64, dir: f64) -> (f64, f64) {
    let vals: Vec<f64> = (1..=4).map(|k| f(t0 + dir * h * k as f64)).collect();
    // Vandermonde solve for the cubic coefficients in s = (t - t0)/(dir*h).
    let mut a = [[0.0; 4]; 4];
    for (row, k) in (1..=4).enumerate() {
        let s = k as f64;
        a[row] = [1.0, s, s * s, s * s * s];
    }
    let b = [vals[0], vals[1], vals[2], vals[3]];
    let c = crate::linalg::solve4(&a, &b).expect("Vandermonde is nonsingular");
    let d1 = c[1] / (dir * h);
    let d2 = 2.0 * c[2] / (h * h);
    (d1, d2)
}

fn phase_key(params: &Params) -> (PhaseLabel, Dominant) {
    let gs = ground_state(params);
    (gs.phase.label, gs.phase.dominant)
}

/// Detects phase-boundary crossings along a path and classifies their
/// Ehrenfest order from one-sided derivatives of the ground-state energy.
/// Label changes with continuous first and second derivatives (entering a
/// superposition without a dominance change) are not transitions and are
/// omitted.
pub fn classify_qpt(path: &ParamPath, n_samples: usize) -> Vec<QptEvent> {
    assert!(n_samples >= 2);
    let eps = |t: f64| ground_state(&path.at(t)).epsilon;
    let mut events: Vec<QptEvent> = Vec::new();
    let mut prev_t = 0.0;
    let mut prev_key = phase_key(&path.at(0.0));
    for i in 1..n_samples {
        let t = i as f64 / (n_samples - 1) as f64;
        let key = phase_key(&path.at(t));
        if key != prev_key {
            // Bisect the label change to locate the boundary.
            let (mut lo, mut hi) = (prev_t, t);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if phase_key(&path.at(mid)) == prev_key {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t_star = 0.5 * (lo + hi);
            let h = PATH_STEP;
            let (d1m, d2m) = one_sided_derivs(eps, t_star, h, -1.0);
            let (d1p, d2p) = one_sided_derivs(eps, t_star, h, 1.0);
            let scale1 = 1.0f64.max(d1m.abs()).max(d1p.abs());
            let scale2 = 1.0f64.max(d2m.abs()).max(d2p.abs());
            let order = if (d1p - d1m).abs() > DERIV_TOL * scale1 {
                Some(1u8)
            } else if (d2p - d2m).abs() > DERIV_TOL * scale2 {
                Some(2u8)
            } else {
                // Label change without a derivative discontinuity
                // (superposition onset) — not a QPT.
                None
            };
            if let Some(order) = order {
                // A boundary hit exactly on a sample node (e.g. a
                // measure-zero symmetric point on the x/y border) produces
                // one label change on each side of the node; merge them.
                match events.last_mut() {
                    Some(last) if (last.t - t_star).abs() < 1e-9 => {
                        last.order = last.order.min(order);
                    }
                    _ => events.push(QptEvent { t: t_star, order }),
                }
            }
        }
        prev_t = t;
        prev_key = key;
    }
    events
}

/// Axis parameter selector for sweeps. `DeltaZx`/`DeltaZy` drive `eta_x` /
/// `eta_y` at fixed `eta_z` (the relevant combinations `eta_z - eta_i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamName {
    Omega,
    Omega0,
    Gamma,
    Xi,
    EtaX,
    EtaY,
    EtaZ,
    DeltaZx,
    DeltaZy,
}

pub fn get_param(params: &Params, name: ParamName) -> f64 {
    match name {
        ParamName::Omega => params.omega,
        ParamName::Omega0 => params.omega0,
        ParamName::Gamma => params.gamma,
        ParamName::Xi => params.xi,
        ParamName::EtaX => params.eta_x,
        ParamName::EtaY => params.eta_y,
        ParamName::EtaZ => params.eta_z,
        ParamName::DeltaZx => params.delta_zx(),
        ParamName::DeltaZy => params.delta_zy(),
    }
}

pub fn set_param(params: &mut Params, name: ParamName, value: f64) {
    match name {
        ParamName::Omega => params.omega = value,
        ParamName::Omega0 => params.omega0 = value,
        ParamName::Gamma => params.gamma = value,
        ParamName::Xi => params.xi = value,
        ParamName::EtaX => params.eta_x = value,
        ParamName::EtaY => params.eta_y = value,
        ParamName::EtaZ => params.eta_z = value,
        ParamName::DeltaZx => params.eta_x = params.eta_z - value,
        ParamName::DeltaZy => params.eta_y = params.eta_z - value,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Axis {
    pub name: ParamName,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.start
        } else {
            self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
        }
    }
}

/// Ties one parameter to another: `target = source + offset`, applied after
/// the axes. Covers shift conventions between either the raw `eta` values
/// or the `delta_z*` combinations.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinkedParam {
    pub target: ParamName,
    pub source: ParamName,
    pub offset: f64,
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: Params,
    pub axis1: Axis,
    pub axis2: Axis,
    pub links: Vec<LinkedParam>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRecord {
    pub v1: f64,
    pub v2: f64,
    pub phase: Phase,
    pub epsilon: f64,
    pub n_fixed_points: usize,
}

/// Number of discrete stationary points (the symmetric continuum ring is
/// flagged by the phase label, not counted here).
pub fn count_fixed_points(params: &Params) -> usize {
    if symmetric_continuum_active(params) {
        return 2;
    }
    let f_x = params.f_x();
    let f_y = params.f_y();
    let mut n = 2;
    if f_x >= 1.0 && (f_x - 1.0).abs() > BORDER_TOL {
        n += 2;
    }
    if f_y >= 1.0 && (f_y - 1.0).abs() > BORDER_TOL {
        n += 2;
    }
    n
}

/// Row-major evaluation of the ground state over a 2D parameter grid.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>, SweepError> {
    let cells = spec.axis1.count.checked_mul(spec.axis2.count).unwrap_or(usize::MAX);
    if cells > 10_000_000 {
        return Err(SweepError::GridTooLarge(cells));
    }
    let mut out = Vec::with_capacity(cells);
    for i in 0..spec.axis1.count {
        let v1 = spec.axis1.value(i);
        for k in 0..spec.axis2.count {
            let v2 = spec.axis2.value(k);
            let mut params = spec.base;
            set_param(&mut params, spec.axis1.name, v1);
            set_param(&mut params, spec.axis2.name, v2);
            for link in &spec.links {
                let v = get_param(&params, link.source) + link.offset;
                set_param(&mut params, link.target, v);
            }
            params.validate().map_err(|e| SweepError::InvalidCell(e.to_string()))?;
            let gs = ground_state(&params);
            out.push(SweepRecord {
                v1,
                v2,
                phase: gs.phase,
                epsilon: gs.epsilon,
                n_fixed_points: count_fixed_points(&params),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn base() -> Params {
        ModelParams::resonant()
    }

    #[test]
    fn ground_state_examples() {
        let gs = ground_state(&Params { xi: 1.0, gamma: 1.0, ..base() });
        assert_abs_diff_eq!(gs.epsilon, -2.125, epsilon = 1e-12);
        assert_eq!(gs.phase.label, PhaseLabel::SuperradiantX);

        let gs = ground_state(&Params { gamma: 0.3, xi: 0.5, ..base() });
        assert_abs_diff_eq!(gs.epsilon, -1.0, epsilon = 1e-12);
        assert_eq!(gs.phase.label, PhaseLabel::Normal);

        // Deformed phase at the Dicke limit with gamma = 0.
        let gs = ground_state(&Params { xi: 1.0, eta_z: 2.0, ..base() });
        assert_abs_diff_eq!(gs.f, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(gs.epsilon, -0.25, epsilon = 1e-12);
        assert_eq!(gs.phase.label, PhaseLabel::Deformed);
    }

    #[test]
    fn deformed_normal_label() {
        let gs = ground_state(&Params { gamma: 0.3, eta_y: 0.4, ..base() });
        assert_eq!(gs.phase.label, PhaseLabel::DeformedNormal);
        assert_eq!(gs.phase.dominant, Dominant::None);
    }

    #[test]
    fn normal_gradient() {
        let params = Params { gamma: 0.4, omega0: 2.0, ..base() };
        match gs_gradient(&params) {
            GsGradient::Interior(g) => {
                assert_eq!(g[0], 0.0);
                assert_eq!(g[1], 0.0);
                assert_eq!(g[2], 0.0);
                assert_abs_diff_eq!(g[3], 0.25, epsilon = 1e-15);
            }
            other => panic!("expected interior gradient, got {other:?}"),
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let mut checked = 0;
        while checked < 100 {
            let params = Params {
                omega: rng.gen_range(0.5..2.0),
                omega0: rng.gen_range(0.5..2.0),
                gamma: rng.gen_range(0.05..2.5),
                xi: rng.gen_range(0.0..=1.0),
                eta_x: rng.gen_range(-1.5..1.5),
                eta_y: rng.gen_range(-1.5..1.5),
                eta_z: rng.gen_range(-1.5..1.5),
            };
            // Skip sets too close to a boundary for central differences.
            let f_x = params.f_x();
            let f_y = params.f_y();
            if (f_x - 1.0).abs() < 1e-3
                || (f_y - 1.0).abs() < 1e-3
                || (f_x >= 1.0 && f_y >= 1.0 && (f_x - f_y).abs() < 1e-3)
            {
                continue;
            }
            let g = match gs_gradient(&params) {
                GsGradient::Interior(g) => g,
                other => panic!("unexpected boundary: {other:?}"),
            };
            let h = 1e-5;
            let eval = |p: &Params| ground_state(p).epsilon;
            let mut fd = [0.0; 4];
            for (k, slot) in fd.iter_mut().enumerate() {
                let mut pp = params;
                let mut pm = params;
                match k {
                    0 => {
                        pp.gamma += h;
                        pm.gamma -= h;
                    }
                    1 => {
                        pp.eta_x += h;
                        pm.eta_x -= h;
                    }
                    2 => {
                        pp.eta_y += h;
                        pm.eta_y -= h;
                    }
                    _ => {
                        pp.eta_z += h;
                        pm.eta_z -= h;
                    }
                }
                *slot = (eval(&pp) - eval(&pm)) / (2.0 * h);
            }
            for k in 0..4 {
                let scale = 1.0f64.max(fd[k].abs());
                assert!(
                    (g[k] - fd[k]).abs() / scale < 1e-7,
                    "component {k}: {} vs {} at {params:?}",
                    g[k],
                    fd[k]
                );
            }
            checked += 1;
        }
    }

    #[test]
    fn boundary_gradient_continuous_in_gamma() {
        // At gamma = gamma_c exactly, the one-sided d/dgamma agree because
        // the branch prefactor vanishes at F = 1.
        let params = Params { gamma: 1.0, eta_y: 0.1, ..base() }; // f_x = 1 exactly
        match gs_gradient(&params) {
            GsGradient::OnBoundary { lower, upper } => {
                assert_abs_diff_eq!(lower[0], upper[0], epsilon = 1e-12);
                assert_abs_diff_eq!(lower[3], upper[3], epsilon = 1e-12);
            }
            other => panic!("expected boundary, got {other:?}"),
        }
    }

    #[test]
    fn qpt_second_order_dicke() {
        let path = ParamPath {
            start: Params { xi: 1.0, ..base() },
            end: Params { xi: 1.0, gamma: 2.0, ..base() },
        };
        let events = classify_qpt(&path, 101);
        assert_eq!(events.len(), 1);
        assert_abs_diff_eq!(events[0].t * 2.0, 0.5, epsilon = 1e-6);
        assert_eq!(events[0].order, 2);
    }

    #[test]
    fn qpt_first_order_at_xy_border() {
        // Sweep delta_zx across delta_zy at fixed gamma above both critical
        // couplings (xi = 0).
        let start = Params { gamma: 1.5, eta_x: 0.5, eta_y: 0.0, eta_z: 0.5, ..base() };
        let end = Params { eta_x: -0.5, ..start };
        // delta_zx goes 0 -> 1 across delta_zy = 0.5.
        let events = classify_qpt(&ParamPath { start, end }, 101);
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].order, 1);
        assert_abs_diff_eq!(events[0].t, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn deformed_onset_is_second_order() {
        // Crossing delta_zy = omega0 at xi = 1 with gamma below gamma_c_x:
        // F = max(1, f_y) passes through 1 continuously, so the first path
        // derivative is continuous and the transition is second order (the
        // branch-gradient prefactor (1 - F^2)/F^2 vanishes at F = 1).
        let start = Params { xi: 1.0, gamma: 0.2, eta_y: 0.0, ..base() };
        let end = Params { eta_y: -2.0, ..start };
        let events = classify_qpt(&ParamPath { start, end }, 101);
        assert_eq!(events.len(), 1);
        assert_abs_diff_eq!(events[0].t, 0.5, epsilon = 1e-6);
        assert_eq!(events[0].order, 2);
    }

    #[test]
    fn superposition_onset_is_not_a_qpt() {
        // xi = 0, gamma ramps with eta_y > 0: superradiant-x first, then the
        // y-pair joins while x stays dominant; no derivative jump.
        let start = Params { gamma: 1.2, eta_y: 0.5, ..base() };
        let end = Params { gamma: 2.2, ..start };
        // f_x crosses 1 at gamma = 1 (before the path), f_y = gamma^2 - 0.5
        // crosses 1 at gamma ~ 1.2247 (inside the path).
        let events = classify_qpt(&ParamPath { start, end }, 201);
        assert!(events.is_empty(), "superposition onset misreported: {events:?}");
        // The energy and its first two path derivatives are continuous
        // across the onset.
        let t_star = (1.5f64.sqrt() - 1.2) / 1.0;
        let eps = |t: f64| ground_state(&ParamPath { start, end }.at(t)).epsilon;
        let (d1m, d2m) = one_sided_derivs(eps, t_star, PATH_STEP, -1.0);
        let (d1p, d2p) = one_sided_derivs(eps, t_star, PATH_STEP, 1.0);
        assert_abs_diff_eq!(d1m, d1p, epsilon = 1e-6);
        assert_abs_diff_eq!(d2m, d2p, epsilon = 1e-4);
    }

    #[test]
    fn energy_continuity_across_boundaries() {
        // Straddle several boundaries with delta = 1e-6 steps.
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        for _ in 0..50 {
            let params = Params {
                gamma: rng.gen_range(0.0..2.5),
                xi: rng.gen_range(0.0..=1.0),
                eta_x: rng.gen_range(-1.5..1.5),
                eta_y: rng.gen_range(-1.5..1.5),
                eta_z: rng.gen_range(-1.5..1.5),
                ..base()
            };
            let delta = 1e-6;
            for name in [ParamName::Gamma, ParamName::EtaX, ParamName::EtaY, ParamName::EtaZ] {
                let mut lo = params;
                let mut hi = params;
                set_param(&mut lo, name, get_param(&params, name) - delta);
                set_param(&mut hi, name, get_param(&params, name) + delta);
                if lo.validate().is_err() {
                    continue;
                }
                // Bound: |d eps / d param| <= pref_max * max coupling slope
                // (~10 for these ranges), so 2 delta * 10 with headroom.
                let jump = (ground_state(&hi).epsilon - ground_state(&lo).epsilon).abs();
                assert!(jump < 5e-5, "energy jump {jump} across {name:?}");
            }
        }
    }

    #[test]
    fn ground_state_below_all_fixed_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        for _ in 0..100 {
            let params = Params {
                omega: rng.gen_range(0.5..2.0),
                omega0: rng.gen_range(0.5..2.0),
                gamma: rng.gen_range(0.0..2.5),
                xi: rng.gen_range(0.0..=1.0),
                eta_x: rng.gen_range(-1.5..1.5),
                eta_y: rng.gen_range(-1.5..1.5),
                eta_z: rng.gen_range(-1.5..1.5),
            };
            let gs = ground_state(&params);
            let set = crate::fixed_points::enumerate_fixed_points(&params).unwrap();
            for p in &set.points {
                assert!(
                    gs.epsilon <= p.epsilon + 1e-10,
                    "gs {} above {:?} at {}",
                    gs.epsilon,
                    p.family,
                    p.epsilon
                );
            }
            assert_abs_diff_eq!(gs.epsilon, set.min_epsilon(), epsilon = 1e-9);
        }
    }

    #[test]
    fn sweep_single_cell_matches_ground_state() {
        let params = Params { gamma: 1.3, eta_y: 0.4, ..base() };
        let spec = SweepSpec {
            base: params,
            axis1: Axis { name: ParamName::Gamma, start: 1.3, stop: 1.3, count: 1 },
            axis2: Axis { name: ParamName::EtaZ, start: 0.0, stop: 0.0, count: 1 },
            links: vec![],
        };
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), 1);
        let gs = ground_state(&params);
        assert_eq!(rows[0].phase, gs.phase);
        assert_abs_diff_eq!(rows[0].epsilon, gs.epsilon, epsilon = 1e-15);
    }

    #[test]
    fn sweep_dicke_deformed_half_plane() {
        // xi = 1 sweep of delta_zx x delta_zy at gamma = 0.5 gamma_1+: the
        // deformed-dominant region is exactly delta_zy >= omega0 (and above
        // the x/y border).
        let base_p = Params { xi: 1.0, gamma: 0.25, ..base() };
        let spec = SweepSpec {
            base: base_p,
            axis1: Axis { name: ParamName::DeltaZx, start: -2.0, stop: 2.0, count: 21 },
            axis2: Axis { name: ParamName::DeltaZy, start: -2.0, stop: 2.0, count: 21 },
            links: vec![],
        };
        let rows = sweep(&spec).unwrap();
        for r in &rows {
            let deformed = r.phase.label == PhaseLabel::Deformed;
            if deformed {
                assert!(r.v2 >= 1.0, "deformed label below the half-plane at {:?}", r);
            }
            if r.v2 < 1.0 {
                assert!(!deformed);
            }
        }
        // Along delta_zx < threshold, normal-to-deformed boundary sits at
        // delta_zy = omega0.
        let f_plus = base_p.f_plus();
        for r in &rows {
            if r.v1 + f_plus < 1.0 && r.v2 >= 1.0 && r.v1 + f_plus < r.v2 {
                assert_eq!(r.phase.label, PhaseLabel::Deformed);
            }
        }
    }

    #[test]
    fn sweep_tc_boundary_traces_critical_couplings() {
        // Fig-1(a)-style sweep: gamma x delta_zx at xi = 0 with the
        // artificial shift delta_zy = delta_zx + omega0/2.
        let spec = SweepSpec {
            base: base(),
            axis1: Axis { name: ParamName::DeltaZx, start: -1.0, stop: 0.9, count: 20 },
            axis2: Axis { name: ParamName::Gamma, start: 0.0, stop: 3.0, count: 61 },
            links: vec![LinkedParam {
                target: ParamName::DeltaZy,
                source: ParamName::DeltaZx,
                offset: 0.5,
            }],
        };
        let rows = sweep(&spec).unwrap();
        // For each delta_zx row, the first non-normal cell along gamma must
        // straddle the analytic critical coupling.
        for i in 0..20 {
            let row = &rows[i * 61..(i + 1) * 61];
            let dzx = row[0].v1;
            let mut params = base();
            set_param(&mut params, ParamName::DeltaZx, dzx);
            set_param(&mut params, ParamName::DeltaZy, dzx + 0.5);
            let cc = crate::fixed_points::critical_couplings(&params);
            let gamma_c = cc.gamma_c_x.min(cc.gamma_c_y.unwrap());
            let first_sr = row
                .iter()
                .find(|r| r.phase.label != PhaseLabel::Normal && r.phase.label != PhaseLabel::DeformedNormal);
            let g_first = first_sr.expect("superradiance within range").v2;
            assert!(
                g_first >= gamma_c - 1e-12 && g_first - gamma_c <= 0.051,
                "first superradiant cell {g_first} vs gamma_c {gamma_c}"
            );
        }
    }

    #[test]
    fn sweep_too_large_rejected() {
        let spec = SweepSpec {
            base: base(),
            axis1: Axis { name: ParamName::Gamma, start: 0.0, stop: 1.0, count: 10_000 },
            axis2: Axis { name: ParamName::EtaZ, start: 0.0, stop: 1.0, count: 10_000 },
            links: vec![],
        };
        assert!(matches!(sweep(&spec), Err(SweepError::GridTooLarge(_))));
    }
}
