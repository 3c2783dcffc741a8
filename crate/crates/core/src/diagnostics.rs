//! Energy and mass functionals, the per-step energy audit, error norms and
//! convergence orders.

use crate::dgspace::{basis_eval, quadrature_rule, FieldCoeffs, QuadDomain};
use crate::error::{Error, Result};
use crate::forms::{FormContext, FormKind};
use crate::mesh::Point;
use crate::model::{density_of_phase, well_eval, ModelParams, Viscosity};
use crate::scheme::{project_potential, State};

/// Per-step summary written to the time series.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyReport {
    pub step: usize,
    pub t: f64,
    /// includes `int rho Pi_h` when body forces act
    pub energy: f64,
    pub mass: f64,
    /// zero for the initial row
    pub deviation: f64,
    pub max_velocity: f64,
    /// `k (m_r ||a||^2, -m_j A1(a, a), -eta A2(v, v))` at the midpoint; zero initially
    pub dissipation: [f64; 3],
    pub min_density: f64,
    pub max_phi: f64,
}

/// Pointwise statistics over the scheme quadrature of one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointStats {
    pub max_velocity: f64,
    pub min_density: f64,
    pub max_phi: f64,
    pub min_phi: f64,
}

/// Calls `f(k, q, weight, phi, v, q_field)` at every scheme quadrature point.
fn for_each_point<F: FnMut(usize, usize, f64, f64, &[f64; 2], &[f64; 2])>(state: &State, mut f: F) {
    let space = state.space();
    let d = space.dim();
    for k in 0..space.num_elements() {
        let tab = space.volume_tab(k);
        for q in 0..tab.len() {
            let (mut phi, mut gphi) = ([0.0; 1], [[0.0; 2]; 1]);
            state.phi.eval_tab(k, tab, q, &mut phi, &mut gphi);
            let (mut v, mut gv) = ([0.0; 2], [[0.0; 2]; 2]);
            state.v.eval_tab(k, tab, q, &mut v[..d], &mut gv[..d]);
            let (mut qv, mut gq) = ([0.0; 2], [[0.0; 2]; 2]);
            state.q.eval_tab(k, tab, q, &mut qv[..d], &mut gq[..d]);
            f(k, q, tab.weights[q], phi[0], &v, &qv);
        }
    }
}

/// `int W(phi) + rho(phi) |v|^2 / 2 + gamma |q|^2 / 2 (+ rho(phi) Pi_h)`
pub fn discrete_energy(params: &ModelParams, state: &State) -> Result<f64> {
    let potential = project_potential(state.space(), params)?;
    let space = state.space().clone();
    let nb = space.dofs_per_element();
    let mut e = 0.0;
    for_each_point(state, |k, iq, w, phi, v, q| {
        let rho = density_of_phase(params, phi);
        let mut s = well_eval(params, phi).0 + 0.5 * rho * (v[0] * v[0] + v[1] * v[1]) + 0.5 * params.gamma * (q[0] * q[0] + q[1] * q[1]);
        if let Some(p) = &potential {
            let tab = space.volume_tab(k);
            let pi: f64 = p.modes(k, 0).iter().zip(&tab.values[iq * nb..(iq + 1) * nb]).map(|(a, b)| a * b).sum();
            s += rho * pi;
        }
        e += w * s;
    });
    Ok(e)
}

/// `int rho(phi)`
pub fn total_mass(params: &ModelParams, state: &State) -> f64 {
    let mut m = 0.0;
    for_each_point(state, |_, _, w, phi, _, _| m += w * density_of_phase(params, phi));
    m
}

/// `max |v|` over quadrature points, with density and phase extrema.
pub fn point_stats(params: &ModelParams, state: &State) -> PointStats {
    let mut s = PointStats {
        max_velocity: 0.0,
        min_density: f64::INFINITY,
        max_phi: f64::NEG_INFINITY,
        min_phi: f64::INFINITY,
    };
    for_each_point(state, |_, _, _, phi, v, _| {
        s.max_velocity = s.max_velocity.max((v[0] * v[0] + v[1] * v[1]).sqrt());
        s.min_density = s.min_density.min(density_of_phase(params, phi));
        s.max_phi = s.max_phi.max(phi);
        s.min_phi = s.min_phi.min(phi);
    });
    s
}

pub fn max_velocity(state: &State) -> f64 {
    point_stats(&ModelParams::default(), state).max_velocity
}

/// `(m_r ||a||^2, -m_j A1(a, a), -eta A2(v, v))`, the tensor form carrying its own viscosities.
pub fn dissipation_terms(params: &ModelParams, a: &FieldCoeffs, v: &FieldCoeffs) -> Result<[f64; 3]> {
    let space = a.space();
    let ctx = FormContext::new(space, params.penalty(space.degree()));
    let l2 = a.as_slice().iter().map(|x| x * x).sum::<f64>();
    let viscous = match params.viscosity {
        Viscosity::Simplified { eta } => -eta * ctx.evaluate(FormKind::A2, v, v)?,
        Viscosity::Tensor { eta1, eta2 } => -ctx.evaluate(FormKind::A2Tensor { eta1, eta2 }, v, v)?,
    };
    Ok([params.m_r * l2, -params.m_j * ctx.evaluate(FormKind::A1, a, a)?, viscous])
}

fn midpoint_field(a: &FieldCoeffs, b: &FieldCoeffs) -> Result<FieldCoeffs> {
    let mut m = a.axpy(1.0, b)?;
    m.as_mut_slice().iter_mut().for_each(|x| *x *= 0.5);
    Ok(m)
}

/// `k`-scaled midpoint dissipation of the step `old -> new`.
pub fn step_dissipation(params: &ModelParams, old: &State, new: &State, k: f64) -> Result<[f64; 3]> {
    let v = midpoint_field(&old.v, &new.v)?;
    let d = dissipation_terms(params, &new.a, &v)?;
    Ok([k * d[0], k * d[1], k * d[2]])
}

/// `E(new) - E(old) + k (m_r ||a||^2 - m_j A1(a, a) - eta A2(v, v))` at the midpoint.
pub fn step_energy_deviation(params: &ModelParams, old: &State, new: &State, k: f64) -> Result<f64> {
    let d = step_dissipation(params, old, new, k)?;
    Ok(discrete_energy(params, new)? - discrete_energy(params, old)? + d.iter().sum::<f64>())
}

/// Report for `new`, with step terms when `old` is given.
pub fn energy_report(params: &ModelParams, old: Option<&State>, new: &State) -> Result<EnergyReport> {
    let stats = point_stats(params, new);
    let energy = discrete_energy(params, new)?;
    let (deviation, dissipation) = match old {
        Some(o) => {
            let k = new.t - o.t;
            let d = step_dissipation(params, o, new, k)?;
            (energy - discrete_energy(params, o)? + d.iter().sum::<f64>(), d)
        }
        None => (0.0, [0.0; 3]),
    };
    Ok(EnergyReport {
        step: new.step,
        t: new.t,
        energy,
        mass: total_mass(params, new),
        deviation,
        max_velocity: stats.max_velocity,
        dissipation,
        min_density: stats.min_density,
        max_phi: stats.max_phi,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorField {
    Phi,
    Velocity,
    Lambda,
}

/// `L^2` norm of `field - exact(x, t)` at one state, by a quadrature of degree
/// `4p + 10` (finer than the scheme's).
pub fn l2_error<F>(state: &State, field: ErrorField, exact: &F) -> Result<f64>
where
    F: Fn(&Point, f64, &mut [f64]),
{
    let space = state.space();
    let coeffs = match field {
        ErrorField::Phi => &state.phi,
        ErrorField::Velocity => &state.v,
        ErrorField::Lambda => &state.lambda,
    };
    let nc = coeffs.ncomp();
    let domain = if space.dim() == 1 { QuadDomain::Interval } else { QuadDomain::Triangle };
    let rule = quadrature_rule(domain, 4 * space.degree() + 10)?;
    let scale = if space.dim() == 1 { 1.0 } else { 2.0 };
    let mut exact_val = vec![0.0; nc];
    let mut e2 = 0.0;
    for k in 0..space.num_elements() {
        let vol = space.mesh().volume(k) * scale;
        for (xi, w) in rule.points.iter().zip(&rule.weights) {
            let (vals, _) = basis_eval(space, k, xi);
            let x = space.to_physical(k, xi);
            exact(&x, state.t, &mut exact_val);
            for (c, ex) in exact_val.iter().enumerate() {
                let u: f64 = coeffs.modes(k, c).iter().zip(&vals).map(|(a, b)| a * b).sum();
                e2 += w * vol * (u - ex).powi(2);
            }
        }
    }
    Ok(e2.sqrt())
}

/// `max_n ||field(t_n) - exact(t_n)||_{L^2}` over the recorded states.
pub fn field_error_norm<F>(trajectory: &[State], field: ErrorField, exact: F) -> Result<f64>
where
    F: Fn(&Point, f64, &mut [f64]),
{
    let mut m = 0.0f64;
    for s in trajectory {
        m = m.max(l2_error(s, field, &exact)?);
    }
    Ok(m)
}

/// `EOC_i = log(e_{i-1} / e_i) / log(N_i / N_{i-1})` for `i >= 1`.
pub fn estimate_eoc(errors: &[(usize, f64)]) -> Result<Vec<f64>> {
    if let Some(&(n, e)) = errors.iter().find(|(n, e)| !(*e > 0.0) || *n == 0) {
        return Err(Error::Domain(format!("EOC needs positive errors and sizes, got ({n}, {e})")));
    }
    Ok(errors
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[1].0 as f64 / w[0].0 as f64).ln())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgspace::{l2_project, DgSpace};
    use crate::mesh::Mesh;
    use std::sync::Arc;

    fn space(spec: &str) -> Arc<DgSpace> {
        DgSpace::new(Arc::new(Mesh::build(&spec.parse().unwrap()).unwrap()), 1).unwrap()
    }

    #[test]
    fn energy_and_mass_examples() {
        let p = ModelParams::default();
        let s = space("interval -1 1 4");
        let zero = State::zeros(&s);
        assert!((discrete_energy(&p, &zero).unwrap() - 2.0).abs() < 1e-13);
        assert!((total_mass(&p, &zero) - 3.0).abs() < 1e-13);
        let mut one = State::zeros(&s);
        one.phi = l2_project(&s, 1, |_, o| o[0] = 1.0);
        assert!(discrete_energy(&p, &one).unwrap().abs() < 1e-13);
        assert!((total_mass(&p, &one) - 2.0).abs() < 1e-13);

        let s2 = space("rectangle 0 1 0 1 2 2");
        let mut st = State::zeros(&s2);
        st.v = l2_project(&s2, 2, |_, o| o.copy_from_slice(&[1.0, 0.0]));
        assert!((discrete_energy(&p, &st).unwrap() - 1.75).abs() < 1e-13);
        assert!((max_velocity(&st) - 1.0).abs() < 1e-13);
        assert_eq!(max_velocity(&zero), 0.0);
    }

    #[test]
    fn error_norm_examples() {
        let s = space("interval 0 1 8");
        let mut st = State::zeros(&s);
        st.phi = l2_project(&s, 1, |x, o| o[0] = x[0]);
        let same = field_error_norm(std::slice::from_ref(&st), ErrorField::Phi, |x, _, o| o[0] = x[0]).unwrap();
        assert!(same < 1e-13);
        let off = field_error_norm(&[st], ErrorField::Phi, |x, _, o| o[0] = x[0] - 0.25).unwrap();
        assert!((off - 0.25).abs() < 1e-13);
    }

    #[test]
    fn eoc_examples() {
        let e = estimate_eoc(&[(10, 1.0), (20, 0.5)]).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-14);
        let t1 = estimate_eoc(&[(2048, 1.5217e-04), (4096, 3.7793e-05)]).unwrap();
        assert!((t1[0] - 2.010).abs() < 1e-3);
        let t2 = estimate_eoc(&[(512, 1.7291e-04), (1024, 1.8023e-05)]).unwrap();
        assert!((t2[0] - 3.262).abs() < 1e-3);
        assert!(estimate_eoc(&[(10, 0.0), (20, 1.0)]).is_err());
    }
}
