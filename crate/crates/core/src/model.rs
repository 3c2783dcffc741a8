//! Physical constants and constitutive functions.

use crate::ad::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Viscosity {
    /// `eta` times the simplified vector Laplacian.
    Simplified { eta: f64 },
    /// Full Navier-Stokes tensor with bulk and shear coefficients.
    Tensor { eta1: f64, eta2: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Well {
    /// `(phi^2 - 1)^2`
    Quartic,
    /// Quartic plus `A [(phi - 1 + |phi - 1|)^2 + (-phi - 1 + |-phi - 1|)^2]`.
    Modified { a: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub rho1: f64,
    pub rho2: f64,
    pub gamma: f64,
    pub viscosity: Viscosity,
    pub m_j: f64,
    pub m_r: f64,
    /// Interior penalty parameter; `None` selects `10 (p + 1)^2`.
    pub sigma: Option<f64>,
    pub well: Well,
    /// Angular velocity of the frame about the out-of-plane axis.
    pub omega: f64,
    /// Gravitational acceleration vector.
    pub gravity: [f64; 2],
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            rho1: 1.0,
            rho2: 2.0,
            gamma: 1e-3,
            viscosity: Viscosity::Simplified { eta: 1e-3 },
            m_j: 1e-2,
            m_r: 1e-2,
            sigma: None,
            well: Well::Quartic,
            omega: 0.0,
            gravity: [0.0, 0.0],
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rho1", self.rho1),
            ("rho2", self.rho2),
            ("gamma", self.gamma),
            ("m_j", self.m_j),
            ("m_r", self.m_r),
            ("sigma", self.sigma.unwrap_or(1.0)),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        let nonneg: Vec<(&str, f64)> = match self.viscosity {
            Viscosity::Simplified { eta } => vec![("eta", eta)],
            Viscosity::Tensor { eta1, eta2 } => vec![("eta1", eta1), ("eta2", eta2)],
        };
        let a = match self.well {
            Well::Modified { a } => a,
            Well::Quartic => 0.0,
        };
        for (name, v) in nonneg.into_iter().chain([("A", a)]) {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be non-negative, got {v}")));
            }
        }
        if !self.omega.is_finite() || !self.gravity.iter().all(|g| g.is_finite()) {
            return Err(Error::Domain("omega and gravity must be finite".into()));
        }
        Ok(())
    }

    /// Penalty actually used for degree `p`.
    pub fn penalty(&self, p: usize) -> f64 {
        self.sigma.unwrap_or_else(|| crate::forms::min_penalty(p))
    }

    /// The modified well with the default `A = (rho2 / rho1)^2`.
    pub fn default_modified_well(&self) -> Well {
        Well::Modified {
            a: (self.rho2 / self.rho1).powi(2),
        }
    }

    pub fn has_body_force(&self) -> bool {
        self.omega != 0.0 || self.gravity != [0.0, 0.0]
    }
}

/// `rho(phi) = [rho1 (1 + phi) + rho2 (1 - phi)] / 2`
pub fn density_of_phase<S: Scalar>(params: &ModelParams, phi: S) -> S {
    (phi * (params.rho1 - params.rho2) + (params.rho1 + params.rho2)) * 0.5
}

/// `(c_+, c_-) = (1/rho1 + 1/rho2, 1/rho1 - 1/rho2)`
pub fn mixture_constants(params: &ModelParams) -> (f64, f64) {
    (1.0 / params.rho1 + 1.0 / params.rho2, 1.0 / params.rho1 - 1.0 / params.rho2)
}

fn excess(x: f64) -> f64 {
    (x - 1.0).max(0.0)
}

/// `(W, W', W''')`; the penalty part of the modified well is piecewise
/// quadratic, so it adds nothing to `W'''`.
pub fn well_eval(params: &ModelParams, phi: f64) -> (f64, f64, f64) {
    let mut w = (phi * phi - 1.0).powi(2);
    let mut dw = 4.0 * phi * (phi * phi - 1.0);
    let d3w = 24.0 * phi;
    if let Well::Modified { a } = params.well {
        let (u, l) = (excess(phi), excess(-phi));
        w += 4.0 * a * (u * u + l * l);
        dw += 8.0 * a * (u - l);
    }
    (w, dw, d3w)
}

/// Difference quotient of `x -> max(x - 1, 0)^2`, in closed form.
fn excess_quotient<S: Scalar>(old: f64, new: S) -> S {
    let n = new.re();
    match (n > 1.0, old > 1.0) {
        (true, true) => new + (old - 2.0),
        (false, false) => S::zero(),
        (true, false) => (new - 1.0).sq() / (new - old),
        (false, true) => S::cst((old - 1.0).powi(2)) / (-new + old),
    }
}

/// `[W(new) - W(old)] / (new - old)`, exact for the wells provided and equal to
/// `W'` where the arguments coincide.
pub fn well_difference_quotient<S: Scalar>(params: &ModelParams, old: f64, new: S) -> S {
    let mid = (new + old) * 0.5;
    let delta = new - old;
    let mut q = mid * (mid.sq() - 1.0) * 4.0 + mid * delta.sq();
    if let Well::Modified { a } = params.well {
        q += (excess_quotient(old, new) - excess_quotient(-old, -new)) * (4.0 * a);
    }
    q
}

/// `tanh(x sqrt(2 / gamma))`, the stationary interface of the quartic well.
pub fn exact_steady_profile(params: &ModelParams, x: f64) -> f64 {
    (x * (2.0 / params.gamma).sqrt()).tanh()
}

/// Second derivative of [`exact_steady_profile`].
pub fn exact_steady_laplacian(params: &ModelParams, x: f64) -> f64 {
    let c2 = 2.0 / params.gamma;
    let phi = exact_steady_profile(params, x);
    2.0 * c2 * phi * (phi * phi - 1.0)
}

/// `mu = W'(phi) - gamma lap(phi)` and `p = phi W'(phi) - W(phi)`.
pub fn chemical_potential_and_pressure(params: &ModelParams, phi: f64, lap_phi: f64) -> (f64, f64) {
    let (w, dw, _) = well_eval(params, phi);
    (dw - params.gamma * lap_phi, phi * dw - w)
}
