//! Model parameters and phase-space coordinates, generic over the scalar.

use num_traits::{Float, FromPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Scalar bound for the generic core-model layer (`f32`, `f64`, ...).
pub trait Real: Float + FromPrimitive + std::fmt::Debug + 'static {}
impl<T: Float + FromPrimitive + std::fmt::Debug + 'static> Real for T {}

/// Shorthand for typed numeric literals.
#[inline]
pub(crate) fn lit<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("literal representable in scalar type")
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamsError {
    #[error("omega must be positive, got {0}")]
    NonPositiveOmega(f64),
    #[error("omega0 must be positive, got {0}")]
    NonPositiveOmega0(f64),
    #[error("gamma must be non-negative, got {0}")]
    NegativeGamma(f64),
    #[error("xi must lie in [0, 1], got {0}")]
    XiOutOfRange(f64),
    #[error("parameter {0} is not finite")]
    NotFinite(&'static str),
    #[error("jz must lie in [-1, 1], got {0}")]
    JzOutOfRange(f64),
}

/// The seven Hamiltonian parameters.
///
/// `H = omega a'a + omega0 Jz + (gamma/sqrt(N)) [(a J+ + a' J-)
///    + xi (a' J+ + a J-)] + (1/N)(eta_x Jx^2 + eta_y Jy^2 + eta_z Jz^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<F = f64> {
    pub omega: F,
    pub omega0: F,
    pub gamma: F,
    pub xi: F,
    pub eta_x: F,
    pub eta_y: F,
    pub eta_z: F,
}

impl<F: Real> ModelParams<F> {
    pub fn new(
        omega: F,
        omega0: F,
        gamma: F,
        xi: F,
        eta_x: F,
        eta_y: F,
        eta_z: F,
    ) -> Result<Self, ParamsError> {
        let p = Self { omega, omega0, gamma, xi, eta_x, eta_y, eta_z };
        p.validate()?;
        Ok(p)
    }

    /// Resonant decoupled baseline: `omega = omega0 = 1`, everything else 0.
    pub fn resonant() -> Self {
        Self {
            omega: F::one(),
            omega0: F::one(),
            gamma: F::zero(),
            xi: F::zero(),
            eta_x: F::zero(),
            eta_y: F::zero(),
            eta_z: F::zero(),
        }
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        let check = |v: F, name: &'static str| -> Result<f64, ParamsError> {
            let x = v.to_f64().filter(|x| x.is_finite()).ok_or(ParamsError::NotFinite(name))?;
            Ok(x)
        };
        let omega = check(self.omega, "omega")?;
        let omega0 = check(self.omega0, "omega0")?;
        let gamma = check(self.gamma, "gamma")?;
        let xi = check(self.xi, "xi")?;
        check(self.eta_x, "eta_x")?;
        check(self.eta_y, "eta_y")?;
        check(self.eta_z, "eta_z")?;
        if omega <= 0.0 {
            return Err(ParamsError::NonPositiveOmega(omega));
        }
        if omega0 <= 0.0 {
            return Err(ParamsError::NonPositiveOmega0(omega0));
        }
        if gamma < 0.0 {
            return Err(ParamsError::NegativeGamma(gamma));
        }
        if !(0.0..=1.0).contains(&xi) {
            return Err(ParamsError::XiOutOfRange(xi));
        }
        Ok(())
    }

    /// `eta_z - eta_x`.
    #[inline]
    pub fn delta_zx(&self) -> F {
        self.eta_z - self.eta_x
    }

    /// `eta_z - eta_y`.
    #[inline]
    pub fn delta_zy(&self) -> F {
        self.eta_z - self.eta_y
    }

    /// `f_+ = gamma^2 (1 + xi)^2 / (omega omega0)`.
    #[inline]
    pub fn f_plus(&self) -> F {
        let c = self.gamma * (F::one() + self.xi);
        c * c / (self.omega * self.omega0)
    }

    /// `f_- = gamma^2 (1 - xi)^2 / (omega omega0)`.
    #[inline]
    pub fn f_minus(&self) -> F {
        let c = self.gamma * (F::one() - self.xi);
        c * c / (self.omega * self.omega0)
    }

    /// `gamma_+ = sqrt(omega omega0) / (1 + xi)`.
    #[inline]
    pub fn gamma_plus(&self) -> F {
        (self.omega * self.omega0).sqrt() / (F::one() + self.xi)
    }

    /// `gamma_- = sqrt(omega omega0) / (1 - xi)`; `+inf` at `xi = 1`.
    #[inline]
    pub fn gamma_minus(&self) -> F {
        let d = F::one() - self.xi;
        if d == F::zero() {
            F::infinity()
        } else {
            (self.omega * self.omega0).sqrt() / d
        }
    }

    /// Branch function `f_x = delta_zx / omega0 + f_+`; the superradiant-x
    /// pair exists iff `f_x >= 1`.
    #[inline]
    pub fn f_x(&self) -> F {
        self.delta_zx() / self.omega0 + self.f_plus()
    }

    /// Branch function `f_y = delta_zy / omega0 + f_-`; the superradiant-y
    /// (xi < 1) or deformed (xi = 1) pair exists iff `f_y >= 1`.
    #[inline]
    pub fn f_y(&self) -> F {
        self.delta_zy() / self.omega0 + self.f_minus()
    }
}

/// A point of the two-degree-of-freedom classical phase space:
/// boson quadratures `(q, p)` (per-j scaled) and Bloch variables
/// `(jz, phi)` with `jz` in `[-1, 1]`, `phi` in `[0, 2*pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpacePoint<F = f64> {
    pub q: F,
    pub p: F,
    pub jz: F,
    pub phi: F,
}

impl<F: Real> PhaseSpacePoint<F> {
    /// Builds a point, normalizing `phi` into `[0, 2*pi)` and rejecting
    /// `|jz| > 1`.
    pub fn new(q: F, p: F, jz: F, phi: F) -> Result<Self, ParamsError> {
        let one = F::one();
        if jz < -one || jz > one || !jz.is_finite() {
            return Err(ParamsError::JzOutOfRange(jz.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { q, p, jz, phi: normalize_angle(phi) })
    }

    /// Bloch-sphere components `(jx, jy, jz)`.
    pub fn bloch(&self) -> (F, F, F) {
        let s = (F::one() - self.jz * self.jz).max(F::zero()).sqrt();
        (s * self.phi.cos(), s * self.phi.sin(), self.jz)
    }
}

/// Normalizes an angle into `[0, 2*pi)`.
pub fn normalize_angle<F: Real>(phi: F) -> F {
    let two_pi = lit::<F>(std::f64::consts::TAU);
    let mut r = phi % two_pi;
    if r < F::zero() {
        r = r + two_pi;
    }
    // The remainder can round up to exactly 2*pi for tiny negatives.
    if r >= two_pi {
        r = F::zero();
    }
    r
}

/// Atomic surface coordinates `u = theta cos phi`, `v = theta sin phi`
/// with `theta = arccos(-jz)`, plus the scaled energy there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint<F = f64> {
    pub u: F,
    pub v: F,
    pub epsilon: F,
}
