//! Semiclassical density of states via boson elimination, energy domains,
//! and ESQPT typology.
//!
//! Integrating out the boson quadratures at scaled energy `epsilon` leaves
//! an indicator integral over the Bloch sphere: a point `(jz, phi)` is
//! accessible iff `cos^2 phi * den >= A(jz, epsilon)` with
//! `den = (f_+ - f_-) - (eta_x - eta_y)/omega0` and
//! `A = (eta_y/omega0 - f_-) + 2 (jz + eta_z jz^2 / (2 omega0) - epsilon)
//! / (1 - jz^2)`. The scaled DoS is `omega nu / 2 = (1/4pi) int M(jz) djz`
//! where `M` is the accessible `phi` measure.

use crate::fixed_points::{enumerate_fixed_points, Family, FixedPointSet};
use crate::params::ModelParams;
use crate::quadrature::integrate_sqrt_endpoints;
use crate::F_FLOOR;
use serde::Serialize;
use std::f64::consts::TAU;
use thiserror::Error;

pub type Params = ModelParams<f64>;

/// Energies closer than this to a critical energy are flagged divergent by
/// [`dos_derivative`].
const CRIT_PROX: f64 = 1e-12;

/// Distinct critical energies are merged within this tolerance.
const ENERGY_MERGE_TOL: f64 = 1e-9;

/// Absolute quadrature tolerance for the `jz` integrals of the measure.
const QUAD_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum DosError {
    #[error("branch function {0} below floor; closed-form roots undefined (decoupled limit)")]
    DegenerateBranch(&'static str),
    #[error("angular denominator below floor; phi-independent condition applies")]
    DegenerateDenominator,
    #[error("derivative diverges at critical energy {0}")]
    Divergence(f64),
}

/// `(f_+ - f_-) - (eta_x - eta_y)/omega0`, the denominator of the bound
/// function `g`.
pub fn denominator(params: &Params) -> f64 {
    params.f_plus() - params.f_minus() - (params.eta_x - params.eta_y) / params.omega0
}

/// Numerator `A(jz, epsilon)` of the bound function; `+-inf` at the poles.
fn bound_numerator(params: &Params, jz: f64, epsilon: f64) -> f64 {
    let s2 = 1.0 - jz * jz;
    let core = jz + params.eta_z * jz * jz / (2.0 * params.omega0) - epsilon;
    let base = params.eta_y / params.omega0 - params.f_minus();
    if s2 <= 0.0 {
        return if core > 0.0 {
            f64::INFINITY
        } else if core < 0.0 {
            f64::NEG_INFINITY
        } else {
            base
        };
    }
    base + 2.0 * core / s2
}

/// Boson-elimination discriminant data at `(jz, phi, epsilon)`: the real-`p`
/// condition is `-p^2 + a p + b >= 0` for some `p`, i.e. `a^2 + 4b >= 0`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiscriminantData {
    pub a: f64,
    pub b: f64,
    /// Bound function `g(jz, epsilon)`; `cos^2 phi >= g` when
    /// `denominator > 0` (reversed when negative).
    pub g: f64,
    pub denominator: f64,
}

pub fn discriminant(params: &Params, jz: f64, phi: f64, epsilon: f64) -> DiscriminantData {
    let w = params.omega;
    let w0 = params.omega0;
    let s2 = 1.0 - jz * jz;
    let (c, sn) = (phi.cos(), phi.sin());
    let a = 2.0 * params.gamma / w * s2.max(0.0).sqrt() * (1.0 - params.xi) * sn;
    let op = params.gamma * (1.0 + params.xi);
    let b = -2.0 / w * jz * (w0 + params.eta_z * jz / 2.0)
        - s2 / w * (params.eta_x * c * c + params.eta_y * sn * sn)
        + 2.0 * epsilon * w0 / w
        + op * op / (w * w) * s2 * c * c;
    let den = denominator(params);
    let g = bound_numerator(params, jz, epsilon) / den;
    DiscriminantData { a, b, g, denominator: den }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitingAngle {
    /// `arccos sqrt(g)` in `[0, pi/2]`; the accessible set is
    /// `[-phi, phi] U [pi - phi, pi + phi]` for positive denominator, the
    /// complement for negative.
    Angle(f64),
    FullCircle,
    Empty,
}

pub fn limiting_angle(params: &Params, jz: f64, epsilon: f64) -> Result<LimitingAngle, DosError> {
    let den = denominator(params);
    if den.abs() < F_FLOOR {
        return Err(DosError::DegenerateDenominator);
    }
    let g = bound_numerator(params, jz, epsilon) / den;
    let partial = LimitingAngle::Angle(g.clamp(0.0, 1.0).sqrt().acos());
    Ok(if den > 0.0 {
        if g <= 0.0 {
            LimitingAngle::FullCircle
        } else if g >= 1.0 {
            LimitingAngle::Empty
        } else {
            partial
        }
    } else if g >= 1.0 {
        LimitingAngle::FullCircle
    } else if g <= 0.0 {
        LimitingAngle::Empty
    } else {
        partial
    })
}

/// Accessible `phi` measure at fixed `jz`, in `[0, 2 pi]`. Covers the
/// degenerate (phi-independent) denominator directly.
pub fn phi_measure(params: &Params, jz: f64, epsilon: f64) -> f64 {
    let den = denominator(params);
    let a = bound_numerator(params, jz, epsilon);
    if den.abs() < F_FLOOR {
        return if a <= 0.0 { TAU } else { 0.0 };
    }
    let g = a / den;
    if den > 0.0 {
        if g <= 0.0 {
            TAU
        } else if g >= 1.0 {
            0.0
        } else {
            4.0 * g.sqrt().acos()
        }
    } else if g >= 1.0 {
        TAU
    } else if g <= 0.0 {
        0.0
    } else {
        TAU - 4.0 * g.sqrt().acos()
    }
}

/// The closed-form `jz` window edges, where defined.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct JzRoots {
    /// Lower/upper x-window edges `jz^(-) <= jz^(+)`; `None` when the
    /// radicand is negative or the value leaves `[-1, 1]`.
    pub jz_minus: Option<f64>,
    pub jz_plus: Option<f64>,
    /// y-window edges `jz^(1) <= jz^(2)`.
    pub jz_1: Option<f64>,
    pub jz_2: Option<f64>,
}

fn closed_form_pair(f: f64, epsilon: f64, eps_s: f64) -> (Option<f64>, Option<f64>) {
    let rad = 2.0 * f * (epsilon - eps_s);
    if rad < 0.0 {
        return (None, None);
    }
    let r = rad.sqrt();
    let lo = -(1.0 + r) / f;
    let hi = -(1.0 - r) / f;
    let (lo, hi) = (lo.min(hi), lo.max(hi));
    let keep = |x: f64| ((-1.0..=1.0).contains(&x)).then_some(x);
    (keep(lo), keep(hi))
}

/// Closed-form window edges `jz^(+-)` (x-branch) and `jz^(1,2)` (y-branch).
pub fn jz_roots(params: &Params, epsilon: f64) -> Result<JzRoots, DosError> {
    let f_x = params.f_x();
    let f_y = params.f_y();
    if f_x.abs() < F_FLOOR {
        return Err(DosError::DegenerateBranch("f_x"));
    }
    let (jz_minus, jz_plus) =
        closed_form_pair(f_x, epsilon, crate::fixed_points::branch_energy(params, f_x));
    // A degenerate y-branch (f_y -> 0) pushes its window edges off to
    // infinity; report the pair as absent rather than failing the x-pair.
    let (jz_1, jz_2) = if f_y.abs() < F_FLOOR {
        (None, None)
    } else {
        closed_form_pair(f_y, epsilon, crate::fixed_points::branch_energy(params, f_y))
    };
    Ok(JzRoots { jz_minus, jz_plus, jz_1, jz_2 })
}

/// Roots of `f jz^2 + 2 jz + c = 0` inside the open interval `(-1, 1)`,
/// robust to `|f| -> 0` (linear fallback).
fn poly_roots_inside(f: f64, c: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if f.abs() < F_FLOOR {
        out.push(-c / 2.0);
    } else {
        let disc = 4.0 - 4.0 * f * c;
        if disc >= 0.0 {
            // Stable quadratic: q = -(b + sign(b) sqrt(disc)) / 2, b = 2.
            let q = -(2.0 + disc.sqrt()) / 2.0;
            out.push(q / f);
            out.push(c / q);
        }
    }
    out.retain(|x| x.is_finite() && x.abs() < 1.0 - 1e-14);
    out
}

/// All `jz` values in `(-1, 1)` where the measure regime changes (the bound
/// `g` crosses 0 or 1), sorted and deduplicated.
fn breakpoints(params: &Params, epsilon: f64) -> Vec<f64> {
    let w0 = params.omega0;
    // g = 1 crossings: f_x jz^2 + 2 jz + (eta_x/omega0 - f_+ - 2 eps) = 0.
    let mut pts = poly_roots_inside(params.f_x(), params.eta_x / w0 - params.f_plus() - 2.0 * epsilon);
    // g = 0 crossings: f_y jz^2 + 2 jz + (eta_y/omega0 - f_- - 2 eps) = 0.
    pts.extend(poly_roots_inside(
        params.f_y(),
        params.eta_y / w0 - params.f_minus() - 2.0 * epsilon,
    ));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    pts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PanelKind {
    Full,
    Partial,
    Empty,
}

/// Panels of `[-1, 1]` between regime breakpoints, classified at midpoints.
fn panels(params: &Params, epsilon: f64) -> Vec<(f64, f64, PanelKind)> {
    let mut edges = vec![-1.0];
    edges.extend(breakpoints(params, epsilon));
    edges.push(1.0);
    edges
        .windows(2)
        .filter(|w| w[1] - w[0] > 1e-14)
        .map(|w| {
            let m = phi_measure(params, 0.5 * (w[0] + w[1]), epsilon);
            let kind = if m >= TAU - 1e-9 {
                PanelKind::Full
            } else if m <= 1e-9 {
                PanelKind::Empty
            } else {
                PanelKind::Partial
            };
            (w[0], w[1], kind)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    BelowGs,
    /// One partial `jz` window, both poles inaccessible.
    SxOnly,
    /// Partial windows around an interior full-circle slice.
    SySlice,
    /// Full-circle cap at the south pole plus one partial window.
    MidSlice,
    Saturated,
}

fn kind_from_panels(panels: &[(f64, f64, PanelKind)]) -> DomainKind {
    let kinds: Vec<PanelKind> = panels.iter().map(|p| p.2).collect();
    if kinds.iter().all(|&k| k == PanelKind::Empty) {
        DomainKind::BelowGs
    } else if kinds.iter().all(|&k| k == PanelKind::Full) {
        DomainKind::Saturated
    } else if kinds.first() == Some(&PanelKind::Full) {
        DomainKind::MidSlice
    } else if kinds.iter().any(|&k| k == PanelKind::Full) {
        DomainKind::SySlice
    } else {
        DomainKind::SxOnly
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DosResult {
    pub epsilon: f64,
    /// `omega nu / 2`, in `[0, 1]`.
    pub nu_scaled: f64,
    pub domain: DomainKind,
    pub quadrature_error: f64,
}

/// Integrates the accessible measure over the panels. Partial panels use
/// the square-root endpoint substitution: the measure approaches its
/// full/empty limits like `sqrt(jz - edge)` at regime breakpoints.
fn integrate_measure(params: &Params, epsilon: f64) -> (f64, f64) {
    let panel_list = panels(params, epsilon);
    let n_partial = panel_list.iter().filter(|p| p.2 == PanelKind::Partial).count().max(1);
    let tol = QUAD_TOL * 4.0 * std::f64::consts::PI / n_partial as f64;
    let mut nu = 0.0;
    let mut err = 0.0;
    for (lo, hi, kind) in &panel_list {
        match kind {
            PanelKind::Empty => {}
            PanelKind::Full => nu += 0.5 * (hi - lo),
            PanelKind::Partial => {
                let r = integrate_sqrt_endpoints(
                    |jz| phi_measure(params, jz, epsilon),
                    *lo,
                    *hi,
                    true,
                    true,
                    tol,
                );
                nu += r.value / (2.0 * TAU);
                err += r.error / (2.0 * TAU);
            }
        }
    }
    (nu, err)
}

/// Scaled semiclassical DoS `omega nu / 2` at scaled energy `epsilon`.
pub fn dos(params: &Params, epsilon: f64) -> DosResult {
    let set = enumerate_fixed_points(params).expect("valid parameters enumerate");
    dos_with_set(params, epsilon, &set)
}

/// [`dos`] with a precomputed stationary-point set (for energy sweeps).
pub fn dos_with_set(params: &Params, epsilon: f64, set: &FixedPointSet) -> DosResult {
    let eps_gs = set.min_epsilon();
    let eps_top = set.points.iter().map(|p| p.epsilon).fold(f64::NEG_INFINITY, f64::max);
    if epsilon < eps_gs {
        return DosResult { epsilon, nu_scaled: 0.0, domain: DomainKind::BelowGs, quadrature_error: 0.0 };
    }
    if epsilon >= eps_top {
        return DosResult { epsilon, nu_scaled: 1.0, domain: DomainKind::Saturated, quadrature_error: 0.0 };
    }
    let panel_list = panels(params, epsilon);
    let domain = kind_from_panels(&panel_list);
    let (nu, err) = integrate_measure(params, epsilon);
    DosResult { epsilon, nu_scaled: nu.clamp(0.0, 1.0), domain, quadrature_error: err }
}

/// Derivative `d(omega nu / 2)/d epsilon`. On partial panels
/// `dM/deps = 4 / (|den| (1 - jz^2) sqrt(g (1 - g)))`; for a degenerate
/// denominator the measure jumps at the moving window edges and the
/// derivative reduces to the edge-motion terms `1/(f_y jz + 1)` per root.
pub fn dos_derivative(params: &Params, epsilon: f64) -> Result<f64, DosError> {
    let set = enumerate_fixed_points(params).expect("valid parameters enumerate");
    let (_, criticals) = domains_from_set(params, &set);
    for c in &criticals {
        if (epsilon - c.epsilon_c).abs() < CRIT_PROX {
            return Err(DosError::Divergence(c.epsilon_c));
        }
    }
    let eps_gs = set.min_epsilon();
    let eps_top = set.points.iter().map(|p| p.epsilon).fold(f64::NEG_INFINITY, f64::max);
    if epsilon < eps_gs || epsilon >= eps_top {
        return Ok(0.0);
    }
    let den = denominator(params);
    let four_pi = 2.0 * TAU;
    if den.abs() < F_FLOOR {
        // Edge-motion terms at the phi-independent window boundaries.
        let f_y = params.f_y();
        let c = params.eta_y / params.omega0 - params.f_minus() - 2.0 * epsilon;
        let mut total = 0.0;
        for jz in poly_roots_inside(f_y, c) {
            total += 0.5 / (f_y * jz + 1.0).abs();
        }
        return Ok(total);
    }
    let mut total = 0.0;
    for (lo, hi, kind) in panels(params, epsilon) {
        if kind != PanelKind::Partial {
            continue;
        }
        let r = integrate_sqrt_endpoints(
            |jz| {
                let g = (bound_numerator(params, jz, epsilon) / den).clamp(1e-300, 1.0);
                4.0 / (den.abs() * (1.0 - jz * jz) * (g * (1.0 - g)).sqrt().max(1e-300))
            },
            lo,
            hi,
            true,
            true,
            QUAD_TOL * four_pi,
        );
        total += r.value / four_pi;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalSource {
    /// The subdominant superradiant/deformed pair (saddle family).
    SaddleY,
    PoleSouth,
    PoleNorth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EsqptType {
    Logarithmic,
    Jump,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriticalEnergy {
    pub epsilon_c: f64,
    pub source: CriticalSource,
    pub esqpt_type: EsqptType,
    /// Number of negative eigenvalues of the reduced Hessian at the
    /// generating stationary point; 1 gives a logarithmic singularity in
    /// the DoS derivative, 2 a jump.
    pub index_r: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyDomain {
    pub lower: f64,
    /// `f64::INFINITY` for the saturated tail.
    pub upper: f64,
    pub kind: DomainKind,
    /// Human-readable description of the bounding `jz` window.
    pub jz_window: String,
}

fn window_description(kind: DomainKind) -> &'static str {
    match kind {
        DomainKind::BelowGs => "empty",
        DomainKind::SxOnly => "jz in [jz^(-), jz^(+)], poles inaccessible",
        DomainKind::SySlice => {
            "jz in [jz^(-), jz^(+)] with full circle on [jz^(1), jz^(2)]"
        }
        DomainKind::MidSlice => "jz in [-1, jz^(+)] with full circle near the south pole",
        DomainKind::Saturated => "jz in [-1, 1], full circle",
    }
}

fn domains_from_set(
    params: &Params,
    set: &FixedPointSet,
) -> (Vec<EnergyDomain>, Vec<CriticalEnergy>) {
    // Candidate boundaries: one entry per distinct stationary energy.
    let mut entries: Vec<(f64, CriticalSource, usize)> = Vec::new();
    let mut push = |eps: f64, source: CriticalSource, r: usize| {
        if let Some(e) = entries.iter_mut().find(|e| (e.0 - eps).abs() < ENERGY_MERGE_TOL) {
            // Pole sources take precedence on merged energies.
            if source != CriticalSource::SaddleY && e.1 == CriticalSource::SaddleY {
                *e = (eps, source, r);
            }
        } else {
            entries.push((eps, source, r));
        }
    };
    for p in &set.points {
        let source = match p.family {
            Family::PoleSouth => CriticalSource::PoleSouth,
            Family::PoleNorth => CriticalSource::PoleNorth,
            _ => CriticalSource::SaddleY,
        };
        push(p.epsilon, source, p.index_r);
    }
    if let Some(ring) = &set.continuum {
        push(ring.epsilon, CriticalSource::SaddleY, 0);
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut domains = Vec::new();
    for w in entries.windows(2) {
        let (lo, hi) = (w[0].0, w[1].0);
        if hi - lo < 1e-12 {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let kind = kind_from_panels(&panels(params, mid));
        domains.push(EnergyDomain {
            lower: lo,
            upper: hi,
            kind,
            jz_window: window_description(kind).to_string(),
        });
    }
    let top = entries.last().expect("at least the poles").0;
    domains.push(EnergyDomain {
        lower: top,
        upper: f64::INFINITY,
        kind: DomainKind::Saturated,
        jz_window: window_description(DomainKind::Saturated).to_string(),
    });

    let criticals = entries
        .iter()
        .skip(1) // the lowest boundary is the ground state, not an ESQPT
        .map(|&(eps, source, r)| CriticalEnergy {
            epsilon_c: eps,
            source,
            esqpt_type: if r == 1 { EsqptType::Logarithmic } else { EsqptType::Jump },
            index_r: r,
        })
        .collect();
    (domains, criticals)
}

/// Ordered energy domains partitioning `[eps_gs, inf)` plus the interior
/// critical energies with their ESQPT classification.
pub fn energy_domains(params: &Params) -> (Vec<EnergyDomain>, Vec<CriticalEnergy>) {
    let set = enumerate_fixed_points(params).expect("valid parameters enumerate");
    domains_from_set(params, &set)
}
