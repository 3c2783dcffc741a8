//! The fully discrete six-field scheme: states, time grids, Newton solves and
//! time marching.

mod assembly;
mod forcing;
mod init;
pub mod kernel;
mod multifrontal;

use std::sync::Arc;

pub use assembly::{eval_vector, Assembler, Pattern, SparseJacobian};
pub use forcing::{body_force_contribution, body_potential, project_potential};
pub use init::{initial_fields, initial_state, Case};
pub use kernel::Mode;
pub use multifrontal::{Dissection, Factorization};

use crate::dgspace::{DgSpace, FieldCoeffs};
use crate::error::{Error, Result};
use crate::model::{mixture_constants, ModelParams};

/// The six discrete fields at one time level.
///
/// `phi`, `v` and `q` are values at `t`. The multiplier-like fields `lambda`,
/// `a` and `b` enter a step only at its midpoint, so after a step they hold the
/// midpoint values of that step; initially they hold the consistent values at `t = 0`.
#[derive(Clone, Debug)]
pub struct State {
    pub phi: FieldCoeffs,
    pub v: FieldCoeffs,
    pub lambda: FieldCoeffs,
    pub a: FieldCoeffs,
    pub b: FieldCoeffs,
    pub q: FieldCoeffs,
    pub t: f64,
    pub step: usize,
}

impl State {
    pub fn zeros(space: &Arc<DgSpace>) -> State {
        let d = space.dim();
        State {
            phi: FieldCoeffs::zeros(space, 1),
            v: FieldCoeffs::zeros(space, d),
            lambda: FieldCoeffs::zeros(space, 1),
            a: FieldCoeffs::zeros(space, 1),
            b: FieldCoeffs::zeros(space, 1),
            q: FieldCoeffs::zeros(space, d),
            t: 0.0,
            step: 0,
        }
    }

    pub fn space(&self) -> &Arc<DgSpace> {
        self.phi.space()
    }

    fn fields(&self) -> [&FieldCoeffs; 6] {
        [&self.phi, &self.v, &self.lambda, &self.a, &self.b, &self.q]
    }

    fn fields_mut(&mut self) -> [&mut FieldCoeffs; 6] {
        [&mut self.phi, &mut self.v, &mut self.lambda, &mut self.a, &mut self.b, &mut self.q]
    }

    /// Global unknown vector (element, component, mode).
    pub fn to_vector(&self) -> Vec<f64> {
        let space = self.space();
        let nb = space.dofs_per_element();
        let mut out = Vec::with_capacity(kernel::num_components(space.dim()) * space.num_dofs());
        for k in 0..space.num_elements() {
            for f in self.fields() {
                for c in 0..f.ncomp() {
                    out.extend_from_slice(f.modes(k, c));
                }
            }
        }
        debug_assert_eq!(out.len() % nb, 0);
        out
    }

    pub fn from_vector(space: &Arc<DgSpace>, x: &[f64], t: f64, step: usize) -> Result<State> {
        let nc = kernel::num_components(space.dim());
        if x.len() != nc * space.num_dofs() {
            return Err(Error::Shape(format!("vector of length {} for {} unknowns", x.len(), nc * space.num_dofs())));
        }
        let mut s = State::zeros(space);
        s.t = t;
        s.step = step;
        let nb = space.dofs_per_element();
        let mut pos = 0;
        for k in 0..space.num_elements() {
            for f in s.fields_mut() {
                for c in 0..f.ncomp() {
                    f.modes_mut(k, c).copy_from_slice(&x[pos..pos + nb]);
                    pos += nb;
                }
            }
        }
        Ok(s)
    }

    /// Largest coefficient difference over all six fields.
    pub fn max_abs_diff(&self, other: &State) -> Result<f64> {
        let mut m = 0.0f64;
        for (a, b) in self.fields().iter().zip(other.fields()) {
            m = m.max(a.max_abs_diff(b)?);
        }
        Ok(m)
    }
}

/// `0 = t_0 < t_1 < ... < t_N = T`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<TimeGrid> {
        if times.is_empty() || times[0] != 0.0 {
            return Err(Error::Domain("time grid must start at 0".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("time grid must be strictly increasing".into()));
        }
        Ok(TimeGrid { times })
    }

    /// `steps` equal steps of length `k`.
    pub fn uniform(k: f64, steps: usize) -> Result<TimeGrid> {
        if !(k > 0.0) {
            return Err(Error::Domain(format!("time step must be positive, got {k}")));
        }
        TimeGrid::new((0..=steps).map(|n| n as f64 * k).collect())
    }

    /// `ceil(T / k_max)` equal steps covering `[0, T]`.
    pub fn covering(t_final: f64, k_max: f64) -> Result<TimeGrid> {
        if !(t_final > 0.0 && k_max > 0.0) {
            return Err(Error::Domain("final time and step must be positive".into()));
        }
        let steps = (t_final / k_max - 1e-9).ceil().max(1.0) as usize;
        TimeGrid::new((0..=steps).map(|n| t_final * n as f64 / steps as f64).collect())
    }

    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn time(&self, n: usize) -> f64 {
        self.times[n]
    }

    /// `k_n = t_{n+1} - t_n`
    pub fn step_size(&self, n: usize) -> f64 {
        self.times[n + 1] - self.times[n]
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("non-empty grid")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonSettings {
    /// tolerance on the max-norm of the residual
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
    /// Replace one divergence row by `lambda_{0,0} = 0` and shift `lambda`, `b`
    /// to zero mean afterwards. Always on when `rho1 = rho2`.
    pub pin_lambda: bool,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        NewtonSettings {
            tol: 1e-10,
            max_iter: 25,
            max_halvings: 10,
            pin_lambda: false,
        }
    }
}

impl NewtonSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain("Newton tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Residual history of one Newton solve.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NewtonReport {
    /// `||R||_inf` before each iteration and after the last one
    pub residuals: Vec<f64>,
}

impl NewtonReport {
    pub fn iterations(&self) -> usize {
        self.residuals.len().saturating_sub(1)
    }

    pub fn final_residual(&self) -> f64 {
        *self.residuals.last().unwrap_or(&f64::NAN)
    }
}

fn max_norm(r: &[f64]) -> f64 {
    r.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

/// Damped Newton iteration for `R(u) = 0` starting from `guess`.
pub fn newton(asm: &Assembler, mode: Mode, old: &[f64], guess: Vec<f64>, settings: &NewtonSettings) -> Result<(Vec<f64>, NewtonReport)> {
    let mut u = guess;
    let mut r = asm.residual(mode, old, &u)?;
    let mut norm = max_norm(&r);
    let mut report = NewtonReport { residuals: vec![norm] };
    let mut iter = 0;
    while norm > settings.tol {
        if iter == settings.max_iter {
            return Err(Error::NonConvergence { iterations: iter, residual: norm });
        }
        let jac = asm.jacobian(mode, old, &u)?;
        let delta = asm.solve(&jac, &r)?;
        let mut alpha = 1.0;
        let mut halvings = 0;
        loop {
            let trial: Vec<f64> = u.iter().zip(&delta).map(|(x, d)| x - alpha * d).collect();
            let accepted = match asm.residual(mode, old, &trial) {
                Ok(rt) => {
                    let nt = max_norm(&rt);
                    if nt <= norm || halvings == settings.max_halvings {
                        Some((trial, rt, nt))
                    } else {
                        None
                    }
                }
                Err(e) if halvings == settings.max_halvings => return Err(e),
                Err(_) => None,
            };
            if let Some((t, rt, nt)) = accepted {
                u = t;
                r = rt;
                norm = nt;
                break;
            }
            alpha *= 0.5;
            halvings += 1;
        }
        iter += 1;
        report.residuals.push(norm);
        log::debug!("newton iteration {iter}: residual {norm:.3e} (step {alpha})");
    }
    Ok((u, report))
}

/// Reusable per-step solver: one assembler (pattern, potential, cached
/// symbolic factorisation) for a fixed space and parameter set.
#[derive(Debug)]
pub struct Stepper {
    asm: Assembler,
    settings: NewtonSettings,
}

impl Stepper {
    pub fn new(space: &Arc<DgSpace>, params: &ModelParams, settings: &NewtonSettings) -> Result<Stepper> {
        params.validate()?;
        settings.validate()?;
        let potential = project_potential(space, params)?;
        let pin = settings.pin_lambda || mixture_constants(params).1 == 0.0;
        Ok(Stepper {
            asm: Assembler::new(space, params, potential, pin),
            settings: settings.clone(),
        })
    }

    pub fn assembler(&self) -> &Assembler {
        &self.asm
    }

    pub fn settings(&self) -> &NewtonSettings {
        &self.settings
    }

    /// One midpoint step of length `k` from `old`.
    pub fn step(&self, old: &State, k: f64) -> Result<(State, NewtonReport)> {
        if !(k > 0.0) {
            return Err(Error::Domain(format!("time step must be positive, got {k}")));
        }
        let x_old = old.to_vector();
        let (x, report) = newton(&self.asm, Mode::Step { k }, &x_old, x_old.clone(), &self.settings)?;
        let mut new = State::from_vector(old.space(), &x, old.t + k, old.step + 1)?;
        if self.asm.pinned_row().is_some() {
            zero_mean_multiplier(&mut new);
        }
        Ok((new, report))
    }

    /// Marches over `grid`, calling `observer(old, new, report)` after every step.
    pub fn advance<F>(&self, state: &State, grid: &TimeGrid, mut observer: F) -> Result<Vec<State>>
    where
        F: FnMut(&State, &State, &NewtonReport),
    {
        let mut traj = vec![state.clone()];
        for n in 0..grid.steps() {
            let old = traj.last().expect("non-empty");
            let (mut new, report) = self.step(old, grid.step_size(n)).map_err(|e| Error::Step {
                step: n + 1,
                source: Box::new(e),
            })?;
            new.t = grid.time(n + 1);
            observer(old, &new, &report);
            traj.push(new);
        }
        Ok(traj)
    }
}

/// Shifts `lambda` and `b` by the mean of `lambda`, a symmetry of the scheme when `rho1 = rho2`.
fn zero_mean_multiplier(s: &mut State) {
    let space = s.space().clone();
    let mesh = space.mesh();
    let mean: f64 = (0..mesh.num_elements()).map(|k| mesh.volume(k).sqrt() * s.lambda.modes(k, 0)[0]).sum::<f64>() / mesh.total_volume();
    for k in 0..mesh.num_elements() {
        let shift = mean * mesh.volume(k).sqrt();
        s.lambda.modes_mut(k, 0)[0] -= shift;
        s.b.modes_mut(k, 0)[0] -= shift;
    }
}

/// Residual of the scheme for the pair of levels.
pub fn assemble_residual(params: &ModelParams, old: &State, new: &State, k: f64, settings: &NewtonSettings) -> Result<Vec<f64>> {
    check_pair(old, new)?;
    Stepper::new(old.space(), params, settings)?.asm.residual(Mode::Step { k }, &old.to_vector(), &new.to_vector())
}

/// Jacobian of [`assemble_residual`] with respect to `new`.
pub fn assemble_jacobian(params: &ModelParams, old: &State, new: &State, k: f64, settings: &NewtonSettings) -> Result<SparseJacobian> {
    check_pair(old, new)?;
    Stepper::new(old.space(), params, settings)?.asm.jacobian(Mode::Step { k }, &old.to_vector(), &new.to_vector())
}

fn check_pair(old: &State, new: &State) -> Result<()> {
    if !old.space().same_as(new.space()) {
        return Err(Error::Shape("states live in different spaces".into()));
    }
    Ok(())
}

/// One Newton-solved step from `old`.
pub fn newton_solve(params: &ModelParams, old: &State, k: f64, settings: &NewtonSettings) -> Result<(State, NewtonReport)> {
    Stepper::new(old.space(), params, settings)?.step(old, k)
}

/// Marches `state` over `grid`.
pub fn advance<F>(params: &ModelParams, state: &State, grid: &TimeGrid, settings: &NewtonSettings, observer: F) -> Result<Vec<State>>
where
    F: FnMut(&State, &State, &NewtonReport),
{
    Stepper::new(state.space(), params, settings)?.advance(state, grid, observer)
}
