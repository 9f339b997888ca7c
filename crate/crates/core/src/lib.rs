//! Semiclassical and exact-diagonalization engine for a generalized Dicke
//! model with collective qubit-qubit interactions.
//!
//! The model couples a single boson mode (frequency `omega`) to a collective
//! pseudospin of `N` qubits (splitting `omega0`) with light-matter coupling
//! `gamma`, counter-rotating weight `xi` in `[0, 1]`, and collective
//! interactions `eta_x Jx^2 + eta_y Jy^2 + eta_z Jz^2` (scaled by `1/N`).
//!
//! Layers:
//! * [`params`], [`model`] — parameter space, classical Hamiltonian, Hamilton
//!   vector field, Hessian, and the `(u, v)` energy-surface chart. These are
//!   generic over the scalar type via `num-traits`; `f64` aliases are
//!   re-exported at the crate root.
//! * [`fixed_points`] — analytic enumeration, Newton refinement, and
//!   Hessian-based classification of stationary points.
//! * [`phase_diagram`] — ground-state closed forms, gradients, QPT order
//!   classification along parameter paths, and 2D sweeps.
//! * [`dos`] — semiclassical density of states, energy domains, and ESQPT
//!   typology; [`quadrature`] supplies the adaptive integrator.
//! * [`quantum`] — finite-size exact diagonalization oracle.
//! * [`dynamics`] — classical trajectory integration and linear stability.
//! * [`oracles`], [`mc`] — independent brute-force checks (grid minimization,
//!   finite differences, Monte Carlo phase-space volumes) used by the test
//!   suite and the `validate` command.

// netlib-src only contributes link flags; an explicit extern keeps the
// dependency alive so those flags reach the final link line.
extern crate netlib_src as _netlib_src;

pub mod dos;
pub mod dynamics;
pub mod fixed_points;
pub mod linalg;
pub mod mc;
pub mod model;
pub mod oracles;
pub mod params;
pub mod phase_diagram;
pub mod quadrature;
pub mod quantum;

pub use params::{ModelParams, ParamsError, PhaseSpacePoint, Real, SurfacePoint};

/// Concrete `f64` aliases for the generic core-model types.
pub type ModelParamsF64 = params::ModelParams<f64>;
pub type PhaseSpacePointF64 = params::PhaseSpacePoint<f64>;
pub type SurfacePointF64 = params::SurfacePoint<f64>;

/// `|jz| > 1 - POLE_GUARD` is treated as the pole limit: the Hamilton
/// equations contain `1/sqrt(1 - jz^2)` and the chart representation takes
/// over there.
pub const POLE_GUARD: f64 = 1e-9;

/// `f`-functions or discriminant denominators below this magnitude follow
/// the degenerate (decoupled/symmetric) code paths instead of dividing.
pub const F_FLOOR: f64 = 1e-10;
