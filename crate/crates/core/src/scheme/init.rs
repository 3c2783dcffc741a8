//! Initial data of the shipped cases and consistent initialisation of the
//! auxiliary fields.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::kernel::{acomp, bcomp, lam, num_components, qcomp, Mode};
use super::{newton, Assembler, NewtonSettings, State};
use crate::dgspace::{l2_project, random_vertex_field, DgSpace, FieldCoeffs};
use crate::error::{Error, Result};
use crate::model::{exact_steady_profile, mixture_constants, ModelParams};

#[derive(Clone, Debug, PartialEq)]
pub enum Case {
    /// `phi = tanh(x_1 sqrt(2 / gamma))`, `v = 0`
    SteadyTanh,
    /// continuous interpolant of `amplitude * U(-1, 1)` vertex values, `v = 0`
    Random { seed: u64, amplitude: f64 },
    /// four bubbles of phase `-1` in `[0, 1]^2`
    Bubbles,
    /// bubble of radius 0.1 centred at `(-0.1, -0.1)`
    RotatingBubble,
    /// heavy phase on top with a cosine velocity kick
    RayleighTaylor,
    /// constant phase, all other fields zero
    Pure { phase: f64 },
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::SteadyTanh => write!(f, "steady-tanh"),
            Case::Random { seed, amplitude } => write!(f, "random {seed} {amplitude}"),
            Case::Bubbles => write!(f, "bubbles"),
            Case::RotatingBubble => write!(f, "rotating-bubble"),
            Case::RayleighTaylor => write!(f, "rayleigh-taylor"),
            Case::Pure { phase } => write!(f, "pure {phase}"),
        }
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Case> {
        let words: Vec<&str> = s.split_whitespace().collect();
        let num = |i: usize| -> Result<f64> {
            words
                .get(i)
                .ok_or_else(|| Error::UnknownCase(s.to_string()))?
                .parse()
                .map_err(|_| Error::UnknownCase(s.to_string()))
        };
        Ok(match words.as_slice() {
            ["steady-tanh"] => Case::SteadyTanh,
            ["random", seed, _] => Case::Random {
                seed: seed.parse().map_err(|_| Error::UnknownCase(s.to_string()))?,
                amplitude: num(2)?,
            },
            ["bubbles"] => Case::Bubbles,
            ["rotating-bubble"] => Case::RotatingBubble,
            ["rayleigh-taylor"] => Case::RayleighTaylor,
            ["pure", _] => Case::Pure { phase: num(1)? },
            _ => return Err(Error::UnknownCase(s.to_string())),
        })
    }
}

fn indicator(inside: bool) -> f64 {
    if inside {
        -1.0
    } else {
        1.0
    }
}

/// `(phi_0, v_0)` of a case, by elementwise projection.
pub fn initial_fields(space: &Arc<DgSpace>, params: &ModelParams, case: &Case) -> Result<(FieldCoeffs, FieldCoeffs)> {
    let d = space.dim();
    let need_2d = |name: &'static str| if d == 2 { Ok(()) } else { Err(Error::UnsupportedDimension(name, d)) };
    let zero_v = FieldCoeffs::zeros(space, d);
    Ok(match case {
        Case::SteadyTanh => (l2_project(space, 1, |x, o| o[0] = exact_steady_profile(params, x[0])), zero_v),
        Case::Random { seed, amplitude } => {
            if !(*amplitude > 0.0) {
                return Err(Error::Domain("random amplitude must be positive".into()));
            }
            (random_vertex_field(space, *seed, *amplitude), zero_v)
        }
        Case::Bubbles => {
            need_2d("bubbles case")?;
            let bubbles = [(0.25, 0.25, 0.05), (0.25, 0.75, 0.01), (0.75, 0.25, 0.01), (0.75, 0.75, 0.01)];
            let phi = l2_project(space, 1, |x, o| {
                o[0] = indicator(bubbles.iter().any(|&(cx, cy, r)| (x[0] - cx).powi(2) + (x[1] - cy).powi(2) <= r * r))
            });
            (phi, zero_v)
        }
        Case::RotatingBubble => {
            need_2d("rotating bubble case")?;
            let phi = l2_project(space, 1, |x, o| o[0] = indicator((x[0] + 0.1).powi(2) + (x[1] + 0.1).powi(2) <= 0.01));
            (phi, zero_v)
        }
        Case::RayleighTaylor => {
            need_2d("Rayleigh-Taylor case")?;
            let phi = l2_project(space, 1, |x, o| o[0] = if x[1] <= 0.0 { 1.0 } else { -1.0 });
            let pi = std::f64::consts::PI;
            let v = l2_project(space, 2, |x, o| {
                o[0] = 0.0;
                o[1] = (1.0 + (pi * x[0]).cos()) * (1.0 + (pi * x[1] / 2.0).cos()) / 4.0;
            });
            (phi, v)
        }
        Case::Pure { phase } => (l2_project(space, 1, |_, o| o[0] = *phase), zero_v),
    })
}

/// Initial state with `q`, `a`, `b` and `lambda` consistent with `(phi_0, v_0)`.
///
/// The semidiscrete system is solved at `t = 0` for `(phi_t, v_t, lambda, a, b, q)`.
/// It is linear and, for `rho1 != rho2`, uniquely solvable. Otherwise
/// `lambda_0 = 0` and `q, a, b` follow from their own equations.
pub fn initial_state(space: &Arc<DgSpace>, params: &ModelParams, case: &Case, settings: &NewtonSettings) -> Result<State> {
    params.validate()?;
    let (phi, v) = initial_fields(space, params, case)?;
    let mut s = State::zeros(space);
    s.phi = phi;
    s.v = v;
    let potential = super::project_potential(space, params)?;
    let asm = Assembler::new(space, params, potential, false);
    let given = s.to_vector();
    let guess = vec![0.0; given.len()];
    let direct = if mixture_constants(params).1 != 0.0 {
        newton(&asm, Mode::Initial, &given, guess.clone(), settings).map(|r| r.0)
    } else {
        Err(Error::Singular("rho1 = rho2".into()))
    };
    let x = match direct {
        Ok(x) => x,
        Err(Error::Singular(_)) if mixture_constants(params).1 == 0.0 => sequential_init(&asm, &given)?,
        Err(e) if e.is_nonconvergence() => {
            log::warn!("consistent initialisation failed ({e}); using lambda_0 = 0");
            sequential_init(&asm, &given)?
        }
        Err(e) => return Err(e),
    };
    // keep phi_0, v_0 and take the auxiliary fields from the solve
    let d = space.dim();
    let nc = num_components(d);
    let nb = space.dofs_per_element();
    let mut out = given;
    for k in 0..space.num_elements() {
        for c in lam(d)..nc {
            let r = (k * nc + c) * nb..(k * nc + c + 1) * nb;
            out[r.clone()].copy_from_slice(&x[r]);
        }
    }
    State::from_vector(space, &out, 0.0, 0)
}

/// `q`, then `a`, then `b` from their rows with `lambda = 0`; every row has
/// the identity mass matrix in its own field.
fn sequential_init(asm: &Assembler, given: &[f64]) -> Result<Vec<f64>> {
    let space = asm.space();
    let d = space.dim();
    let nc = num_components(d);
    let nb = space.dofs_per_element();
    let mut x = vec![0.0; given.len()];
    for comps in [qcomp(d)..qcomp(d) + d, acomp(d)..acomp(d) + 1, bcomp(d)..bcomp(d) + 1] {
        let r = asm.residual(Mode::Initial, given, &x)?;
        for k in 0..space.num_elements() {
            for c in comps.clone() {
                for i in 0..nb {
                    let idx = (k * nc + c) * nb + i;
                    x[idx] -= r[idx];
                }
            }
        }
    }
    Ok(x)
}
