//! Rotating-frame and gravity forcing.
//!
//! Centrifugal force and gravity derive from the potential
//! `Pi(x) = -omega^2 |x|^2 / 2 - g . x`, so that the force density is
//! `-rho grad Pi`. The scheme uses the `L^2` projection of `Pi` and adds
//! `rho Pi` to the energy; the Coriolis force does no work.

use std::sync::Arc;

use crate::dgspace::{l2_project, DgSpace, FieldCoeffs};
use crate::error::{Error, Result};
use crate::mesh::Point;
use crate::model::ModelParams;

/// `-rho Omega x (Omega x x) - 2 rho Omega x v + rho g` with `Omega = (0, 0, omega)`.
pub fn body_force_contribution(params: &ModelParams, dim: usize, x: &Point, rho: f64, v: &[f64; 2]) -> Result<[f64; 2]> {
    if dim == 1 && params.omega != 0.0 {
        return Err(Error::UnsupportedDimension("rotating frame", 1));
    }
    let w = params.omega;
    let g = params.gravity;
    Ok([
        rho * (w * w * x[0] + 2.0 * w * v[1] + g[0]),
        rho * (w * w * x[1] - 2.0 * w * v[0] + g[1]),
    ])
}

/// `Pi(x)`
pub fn body_potential(params: &ModelParams, x: &Point) -> f64 {
    let w2 = params.omega * params.omega;
    -0.5 * w2 * (x[0] * x[0] + x[1] * x[1]) - params.gravity[0] * x[0] - params.gravity[1] * x[1]
}

/// Projected potential, or `None` without body forces.
pub fn project_potential(space: &Arc<DgSpace>, params: &ModelParams) -> Result<Option<FieldCoeffs>> {
    if !params.has_body_force() {
        return Ok(None);
    }
    if space.dim() == 1 && params.omega != 0.0 {
        return Err(Error::UnsupportedDimension("rotating frame", 1));
    }
    if space.dim() == 1 && params.gravity[1] != 0.0 {
        return Err(Error::Domain("gravity in 1D must have a zero second component".into()));
    }
    Ok(Some(l2_project(space, 1, |x, out| out[0] = body_potential(params, x))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn force_examples() {
        let mut p = ModelParams::default();
        assert_eq!(body_force_contribution(&p, 2, &[0.3, 0.4], 1.0, &[1.0, 2.0]).unwrap(), [0.0, 0.0]);
        p.omega = 1.0;
        assert_eq!(body_force_contribution(&p, 2, &[1.0, 0.0], 1.0, &[0.0, 0.0]).unwrap(), [1.0, 0.0]);
        assert_eq!(body_force_contribution(&p, 2, &[0.0, 0.0], 1.0, &[1.0, 0.0]).unwrap(), [0.0, -2.0]);
        assert!(matches!(
            body_force_contribution(&p, 1, &[0.0, 0.0], 1.0, &[0.0, 0.0]),
            Err(Error::UnsupportedDimension(_, 1))
        ));
    }

    #[test]
    fn potential_gradient_gives_the_conservative_force() {
        let p = ModelParams {
            omega: 0.7,
            gravity: [0.1, -0.3],
            ..Default::default()
        };
        let x = [0.4, -0.9];
        let e = 1e-6;
        let gx = (body_potential(&p, &[x[0] + e, x[1]]) - body_potential(&p, &[x[0] - e, x[1]])) / (2.0 * e);
        let gy = (body_potential(&p, &[x[0], x[1] + e]) - body_potential(&p, &[x[0], x[1] - e])) / (2.0 * e);
        let f = body_force_contribution(&p, 2, &x, 1.0, &[0.0, 0.0]).unwrap();
        assert!((f[0] + gx).abs() < 1e-8 && (f[1] + gy).abs() < 1e-8);
    }
}
