//! Simulation, convergence and audit drivers.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{RunConfig, TestCase, TimeStep};
use super::output::{self, ConvergenceRow, SnapshotFormat, TimeseriesWriter};
use crate::dgspace::{DgSpace, FieldCoeffs};
use crate::diagnostics::{energy_report, l2_error, EnergyReport, ErrorField};
use crate::error::{Error, Result};
use crate::forms::{elementwise_integration_terms, is_negative_semidefinite, FormContext, FormKind};
use crate::mesh::{Mesh, Point};
use crate::model::{exact_steady_profile, well_difference_quotient, well_eval, ModelParams, Viscosity, Well};
use crate::scheme::{initial_state, project_potential, Assembler, Case, Mode, NewtonReport, NewtonSettings, State, Stepper, TimeGrid};

/// Outcome of a completed run.
#[derive(Clone, Debug)]
pub struct RunSummary {
    /// one report per time level, initial state first
    pub reports: Vec<EnergyReport>,
    pub max_newton_iterations: usize,
    pub final_state: State,
    pub seconds: f64,
}

impl RunSummary {
    pub fn steps(&self) -> usize {
        self.reports.len() - 1
    }

    pub fn max_abs_deviation(&self) -> f64 {
        self.reports.iter().map(|r| r.deviation.abs()).fold(0.0, f64::max)
    }

    /// `max_n |m_n - m_0| / m_0`
    pub fn relative_mass_drift(&self) -> f64 {
        let m0 = self.reports[0].mass;
        self.reports.iter().map(|r| (r.mass - m0).abs() / m0.abs()).fold(0.0, f64::max)
    }

    /// Largest one-step energy increase.
    pub fn max_energy_increase(&self) -> f64 {
        self.reports.windows(2).map(|w| w[1].energy - w[0].energy).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_phi(&self) -> f64 {
        self.reports.iter().map(|r| r.max_phi).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_density(&self) -> f64 {
        self.reports.iter().map(|r| r.min_density).fold(f64::INFINITY, f64::min)
    }

    pub fn max_velocity(&self) -> f64 {
        self.reports.iter().map(|r| r.max_velocity).fold(0.0, f64::max)
    }
}

/// Space of a configuration.
pub fn build_space(config: &RunConfig) -> Result<Arc<DgSpace>> {
    DgSpace::new(Arc::new(Mesh::build(&config.mesh)?), config.degree)
}

/// Runs `config` in memory. `observer(state, newton, report)` sees the initial
/// state (with `newton = None`) and every accepted step.
pub fn simulate<F>(config: &RunConfig, mut observer: F) -> Result<RunSummary>
where
    F: FnMut(&State, Option<&NewtonReport>, &EnergyReport) -> Result<()>,
{
    config.validate()?;
    let start = Instant::now();
    let space = build_space(config)?;
    let grid = TimeGrid::covering(config.t_final, config.step_size()?)?;
    let mut state = initial_state(&space, &config.params, &config.initial, &config.newton)?;
    let stepper = Stepper::new(&space, &config.params, &config.newton)?;
    let first = energy_report(&config.params, None, &state)?;
    observer(&state, None, &first)?;
    let mut reports = vec![first];
    let mut max_its = 0;
    let every = (grid.steps() / 10).max(1);
    for n in 0..grid.steps() {
        let wrap = |e: Error| Error::Step {
            step: n + 1,
            source: Box::new(e),
        };
        let (mut new, newton) = stepper.step(&state, grid.step_size(n)).map_err(wrap)?;
        new.t = grid.time(n + 1);
        let report = energy_report(&config.params, Some(&state), &new).map_err(wrap)?;
        observer(&new, Some(&newton), &report)?;
        max_its = max_its.max(newton.iterations());
        if (n + 1) % every == 0 {
            log::info!(
                "step {}/{} t = {:.4} E = {:.6e} dev = {:.2e} newton = {}",
                n + 1,
                grid.steps(),
                new.t,
                report.energy,
                report.deviation,
                newton.iterations()
            );
        }
        reports.push(report);
        state = new;
    }
    Ok(RunSummary {
        reports,
        max_newton_iterations: max_its,
        final_state: state,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn manifest_header(command: &str, config: &RunConfig, extra: &[(&str, String)]) -> Result<String> {
    let mut s = format!("# nsk-dg {}\ncommand = {command}\n", env!("CARGO_PKG_VERSION"));
    s.push_str(&format!("time_step = {:e}\n", config.step_size()?));
    for (k, v) in extra {
        s.push_str(&format!("{k} = {v}\n"));
    }
    s.push_str("# configuration\n");
    s.push_str(&config.to_text());
    Ok(s)
}

fn append(path: &Path, text: &str) -> Result<()> {
    let mut f = output::io(path, OpenOptions::new().append(true).open(path))?;
    output::io(path, f.write_all(text.as_bytes()))
}

fn create_dir(out: &Path) -> Result<()> {
    output::io(out, std::fs::create_dir_all(out))
}

/// Runs `config` and writes `timeseries.csv`, snapshots and `manifest.txt` to `out`.
///
/// On failure the files written so far are kept and the manifest records the error.
pub fn run_simulation(config: &RunConfig, out: &Path) -> Result<RunSummary> {
    config.validate()?;
    create_dir(out)?;
    let manifest = out.join("manifest.txt");
    output::write_text(&manifest, &manifest_header("run", config, &[])?)?;
    let mut ts = TimeseriesWriter::create(&out.join("timeseries.csv"))?;
    let format = SnapshotFormat::for_dim(config.mesh.dim());
    let steps = TimeGrid::covering(config.t_final, config.step_size()?)?.steps();
    let every = config.snapshot_every;
    let mut snapshots = Vec::new();
    let result = simulate(config, |state, newton, report| {
        ts.push(report, newton)?;
        if every > 0 && (state.step % every == 0 || state.step == steps) {
            let name = format!("snapshot_{:06}.{}", state.step, format.extension());
            output::write_field_snapshot(state, &out.join(&name), format)?;
            snapshots.push(name);
        }
        Ok(())
    });
    let rows = ts.rows();
    ts.finish()?;
    let mut tail = format!("# result\nrows = {rows}\nsnapshots = {}\n", snapshots.len());
    match &result {
        Ok(s) => tail.push_str(&format!(
            "status = ok\nsteps = {}\nmax_abs_deviation = {:e}\nrelative_mass_drift = {:e}\nmax_newton_iterations = {}\nseconds = {:.3}\n",
            s.steps(),
            s.max_abs_deviation(),
            s.relative_mass_drift(),
            s.max_newton_iterations,
            s.seconds
        )),
        Err(e) => tail.push_str(&format!("status = failed\nerror = {e}\n")),
    }
    append(&manifest, &tail)?;
    result
}

/// `(phi, v, lambda)` of the stationary tanh solution.
pub fn steady_exact(params: &ModelParams) -> impl Fn(ErrorField) -> Box<dyn Fn(&Point, f64, &mut [f64])> + '_ {
    move |field| match field {
        ErrorField::Phi => {
            let p = params.clone();
            Box::new(move |x: &Point, _t: f64, o: &mut [f64]| o[0] = exact_steady_profile(&p, x[0]))
        }
        _ => Box::new(|_x: &Point, _t: f64, o: &mut [f64]| o.fill(0.0)),
    }
}

/// Errors of one refinement level: the maximum over steps `1..=N` of the
/// `L^2` errors of `phi`, `v` and `lambda` against the stationary solution.
pub fn convergence_level(config: &RunConfig, n: usize) -> Result<ConvergenceRow> {
    let mut c = config.with_resolution(n)?;
    c.timestep = TimeStep::MeshSquared;
    let exact = steady_exact(&config.params);
    let fields = [ErrorField::Phi, ErrorField::Velocity, ErrorField::Lambda];
    let funcs: Vec<_> = fields.iter().map(|&f| exact(f)).collect();
    let mut e = [0.0f64; 3];
    simulate(&c, |state, newton, _| {
        if newton.is_some() {
            for (i, f) in fields.iter().enumerate() {
                e[i] = e[i].max(l2_error(state, *f, &funcs[i])?);
            }
        }
        Ok(())
    })?;
    Ok(ConvergenceRow {
        n,
        e_phi: e[0],
        e_v: e[1],
        e_lambda: e[2],
    })
}

/// Convergence study on interval meshes with `levels` elements and `k = h^2`.
/// Writes `convergence.csv` and `manifest.txt` to `out` when given.
pub fn run_convergence(config: &RunConfig, levels: &[usize], out: Option<&Path>) -> Result<Vec<ConvergenceRow>> {
    if config.initial != Case::SteadyTanh {
        return Err(Error::Domain(format!("convergence studies need steady-tanh initial data, got `{}`", config.initial)));
    }
    if levels.is_empty() || levels.contains(&0) {
        return Err(Error::Domain("levels must be positive element counts".into()));
    }
    config.with_resolution(levels[0])?;
    let mut rows = Vec::new();
    for &n in levels {
        let row = convergence_level(config, n)?;
        log::info!("N = {n}: e_phi = {:.4e} e_v = {:.4e} e_lambda = {:.4e}", row.e_phi, row.e_v, row.e_lambda);
        rows.push(row);
    }
    if let Some(out) = out {
        create_dir(out)?;
        output::write_text(&out.join("convergence.csv"), &output::convergence_csv(&rows))?;
        let levels_text = levels.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(",");
        let mut m = manifest_header("converge", config, &[("levels", levels_text), ("k", "h^2".into())])?;
        m.push_str("# result\nstatus = ok\n");
        output::write_text(&out.join("manifest.txt"), &m)?;
    }
    Ok(rows)
}

/// One line of the audit suite.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

impl std::fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {:.3e} (tolerance {:.0e})", self.name, self.value, self.tolerance)
    }
}

fn outcome(name: impl Into<String>, value: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        value: if value.is_nan() { f64::INFINITY } else { value },
        tolerance,
    }
}

fn space_of(spec: &str, p: usize) -> Result<Arc<DgSpace>> {
    DgSpace::new(Arc::new(Mesh::build(&spec.parse().map_err(Error::InvalidSpec)?)?), p)
}

fn random_field(space: &Arc<DgSpace>, ncomp: usize, rng: &mut ChaCha8Rng, amplitude: f64) -> Result<FieldCoeffs> {
    let dist = Uniform::new_inclusive(-amplitude, amplitude);
    FieldCoeffs::from_vec(space, ncomp, (0..ncomp * space.num_dofs()).map(|_| dist.sample(rng)).collect())
}

fn random_state(space: &Arc<DgSpace>, rng: &mut ChaCha8Rng) -> Result<State> {
    let d = space.dim();
    let mut s = State::zeros(space);
    s.phi = random_field(space, 1, rng, 0.5)?;
    s.v = random_field(space, d, rng, 0.3)?;
    s.lambda = random_field(space, 1, rng, 0.3)?;
    s.a = random_field(space, 1, rng, 0.3)?;
    s.b = random_field(space, 1, rng, 0.3)?;
    s.q = random_field(space, d, rng, 0.3)?;
    Ok(s)
}

/// `max |J - J_fd| / max |J|` at a random pair of states, central differences.
pub fn jacobian_fd_error(space: &Arc<DgSpace>, params: &ModelParams, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let old = random_state(space, &mut rng)?.to_vector();
    let new = random_state(space, &mut rng)?.to_vector();
    let asm = Assembler::new(space, params, project_potential(space, params)?, false);
    let mode = Mode::Step { k: 0.1 };
    let jac = asm.jacobian(mode, &old, &new)?;
    let n = new.len();
    let eps = 1e-6;
    let (mut diff, mut scale) = (0.0f64, 0.0f64);
    for j in 0..n {
        let mut up = new.clone();
        let mut dn = new.clone();
        up[j] += eps;
        dn[j] -= eps;
        let (ru, rd) = (asm.residual(mode, &old, &up)?, asm.residual(mode, &old, &dn)?);
        for i in 0..n {
            let fd = (ru[i] - rd[i]) / (2.0 * eps);
            let exact = jac.get(i, j);
            diff = diff.max((fd - exact).abs());
            scale = scale.max(exact.abs());
        }
    }
    Ok(diff / scale)
}

/// `(max relative asymmetry, all semidefinite)` of the dense form matrices.
pub fn form_matrix_audit(space: &Arc<DgSpace>) -> (f64, bool) {
    let ctx = FormContext::with_default_penalty(space);
    let mut asym = 0.0f64;
    let mut nsd = true;
    for kind in [FormKind::A1, FormKind::A2, FormKind::A2Tensor { eta1: 0.001, eta2: 0.005 }] {
        let m = ctx.matrix(kind);
        let scale = m.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
        for i in 0..m.len() {
            for j in 0..i {
                asym = asym.max((m[i][j] - m[j][i]).abs() / scale);
            }
        }
        nsd &= is_negative_semidefinite(&m);
    }
    (asym, nsd)
}

/// Relative defect of the elementwise integration identity for random fields.
pub fn integration_identity_defect(space: &Arc<DgSpace>, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_field(space, space.dim(), &mut rng, 1.0)?;
    let phi = random_field(space, 1, &mut rng, 1.0)?;
    let t = elementwise_integration_terms(&p, &phi)?;
    let scale = t.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    Ok((t[0] + t[1] - t[2] - t[3]).abs() / scale)
}

/// Largest relative gap between the well quotient and the direct quotient
/// `[W(y) - W(x)] / (y - x)` over `samples` random pairs with `|y - x| >= 1e-6`.
pub fn quotient_exactness(params: &ModelParams, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = Uniform::new_inclusive(-1.5, 1.5);
    let mut worst = 0.0f64;
    let mut taken = 0;
    while taken < samples {
        let (x, y): (f64, f64) = (dist.sample(&mut rng), dist.sample(&mut rng));
        if (y - x).abs() < 1e-6 {
            continue;
        }
        taken += 1;
        let direct = (well_eval(params, y).0 - well_eval(params, x).0) / (y - x);
        let q: f64 = well_difference_quotient(params, x, y);
        worst = worst.max((q - direct).abs() / direct.abs().max(1.0));
    }
    worst
}

/// Largest coefficient change of a pure-phase state over `steps` steps.
pub fn pure_phase_drift(space: &Arc<DgSpace>, params: &ModelParams, phase: f64, steps: usize) -> Result<f64> {
    let settings = NewtonSettings::default();
    let s0 = initial_state(space, params, &Case::Pure { phase }, &settings)?;
    let stepper = Stepper::new(space, params, &settings)?;
    let mut s = s0.clone();
    let mut drift = 0.0f64;
    for _ in 0..steps {
        s = stepper.step(&s, 0.01)?.0;
        drift = drift.max(s.max_abs_diff(&s0)?);
    }
    Ok(drift)
}

/// `max |(v.grad)v.v - grad(|v|^2)/2 . v| / max |v|^3 |grad v|` over the
/// quadrature points of a random velocity field.
pub fn skew_identity_defect(space: &Arc<DgSpace>, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = space.dim();
    let v = random_field(space, d, &mut rng, 1.0)?;
    let (mut defect, mut scale) = (0.0f64, 0.0f64);
    for k in 0..space.num_elements() {
        let tab = space.volume_tab(k);
        for q in 0..tab.len() {
            let (mut val, mut g) = ([0.0; 2], [[0.0; 2]; 2]);
            v.eval_tab(k, tab, q, &mut val[..d], &mut g[..d]);
            let mut conv = 0.0;
            let mut half_grad = 0.0;
            for i in 0..d {
                for j in 0..d {
                    conv += val[j] * g[i][j] * val[i];
                    half_grad += val[i] * g[i][j] * val[j];
                }
            }
            defect = defect.max((conv - half_grad).abs());
            scale = scale.max(conv.abs()).max(half_grad.abs());
        }
    }
    Ok(defect / scale.max(f64::MIN_POSITIVE))
}

/// Short, coarse version of a shipped case for the audit suite.
pub fn audit_config(case: TestCase) -> RunConfig {
    let mut c = RunConfig::defaults(case);
    c.mesh = match case {
        TestCase::Test1 | TestCase::Test6 => "interval -1 1 40",
        TestCase::Test2 | TestCase::Test3 => "rectangle 0 1 0 1 4 4",
        TestCase::Test4 => "disk 1 2",
        TestCase::Test5 => "rectangle -1 1 -2 2 2 4",
    }
    .parse()
    .expect("valid audit mesh");
    c.t_final = 0.05;
    c
}

/// The property and audit suite behind the `check` subcommand.
pub fn run_checks() -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    let quartic = ModelParams::default();
    let rotating = ModelParams {
        omega: 1.0,
        viscosity: Viscosity::Tensor { eta1: 0.001, eta2: 0.005 },
        gravity: [0.0, -0.01],
        ..quartic.clone()
    };
    let modified = ModelParams {
        rho2: 10.0,
        well: Well::Modified { a: 100.0 },
        ..quartic.clone()
    };
    let one_d = space_of("interval -1 1 4", 1)?;
    let one_d2 = space_of("interval -1 1 3", 2)?;
    let two_d = space_of("rectangle 0 1 0 1 1 1", 1)?;
    out.push(outcome("Jacobian vs finite differences, 1D p=1", jacobian_fd_error(&one_d, &quartic, 1)?, 1e-6));
    out.push(outcome("Jacobian vs finite differences, 1D p=2 modified well", jacobian_fd_error(&one_d2, &modified, 2)?, 1e-6));
    out.push(outcome("Jacobian vs finite differences, 2D rotating tensor", jacobian_fd_error(&two_d, &rotating, 3)?, 1e-6));
    for (spec, p) in [("interval -1 1 6", 1), ("rectangle 0 1 0 1 2 2", 1), ("disk 1 2", 2)] {
        let (asym, nsd) = form_matrix_audit(&space_of(spec, p)?);
        out.push(outcome(format!("form symmetry on `{spec}` p={p}"), asym, 1e-12));
        out.push(outcome(format!("form semidefiniteness on `{spec}` p={p}"), if nsd { 0.0 } else { 1.0 }, 0.0));
    }
    for (i, (spec, p)) in [("interval -1 1 7", 2), ("rectangle -1 1 -2 2 3 5", 1), ("disk 1 3", 2)].into_iter().enumerate() {
        let defect = integration_identity_defect(&space_of(spec, p)?, i as u64)?;
        out.push(outcome(format!("elementwise integration identity on `{spec}` p={p}"), defect, 1e-11));
    }
    out.push(outcome("quartic quotient vs direct quotient, 10^4 pairs", quotient_exactness(&quartic, 10_000, 7), 1e-10));
    out.push(outcome("modified quotient vs direct quotient, 10^4 pairs", quotient_exactness(&modified, 10_000, 8), 1e-10));
    for phase in [1.0, -1.0] {
        out.push(outcome(format!("pure phase {phase} fixed point, 1D, 10 steps"), pure_phase_drift(&space_of("interval -1 1 8", 2)?, &quartic, phase, 10)?, 1e-12));
    }
    out.push(outcome("pure phase fixed point, 2D, 10 steps", pure_phase_drift(&space_of("rectangle 0 1 0 1 2 2", 1)?, &quartic, 1.0, 10)?, 1e-12));
    out.push(outcome("skew-symmetric convection identity", skew_identity_defect(&space_of("disk 1 2", 2)?, 4)?, 1e-14));
    for case in TestCase::ALL {
        let c = audit_config(case);
        let s = simulate(&c, |_, _, _| Ok(()))?;
        out.push(outcome(format!("{case} energy deviation, {} steps on `{}`", s.steps(), c.mesh), s.max_abs_deviation(), 1e-8));
        out.push(outcome(format!("{case} relative mass drift"), s.relative_mass_drift(), 1e-9));
    }
    Ok(out)
}
