use std::sync::Arc;

use nsk_dg::cli::driver::{jacobian_fd_error, pure_phase_drift};
use nsk_dg::dgspace::DgSpace;
use nsk_dg::diagnostics::{discrete_energy, step_energy_deviation, total_mass};
use nsk_dg::mesh::Mesh;
use nsk_dg::model::{ModelParams, Viscosity, Well};
use nsk_dg::scheme::{initial_state, Assembler, Case, Mode, NewtonSettings, State, Stepper, TimeGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn space(spec: &str, p: usize) -> Arc<DgSpace> {
    DgSpace::new(Arc::new(Mesh::build(&spec.parse().unwrap()).unwrap()), p).unwrap()
}

#[test]
fn jacobian_matches_finite_differences() {
    let equal = ModelParams { rho2: 1.0, ..ModelParams::default() };
    let gravity = ModelParams {
        gravity: [0.3, 0.0],
        rho2: 5.0,
        ..ModelParams::default()
    };
    let rotating = ModelParams {
        omega: 2.0,
        viscosity: Viscosity::Tensor { eta1: 0.01, eta2: 0.02 },
        well: Well::Modified { a: 4.0 },
        ..ModelParams::default()
    };
    let cases = [
        ("interval -1 1 3", 1, &equal),
        ("interval -1 1 3", 3, &gravity),
        ("rectangle 0 1 0 1 1 1", 2, &gravity),
        ("disk 1 1", 1, &rotating),
    ];
    for (i, (spec, p, params)) in cases.into_iter().enumerate() {
        let e = jacobian_fd_error(&space(spec, p), params, i as u64).unwrap();
        assert!(e <= 1e-6, "{spec} p={p}: {e:e}");
    }
}

#[test]
fn multifrontal_agrees_with_sparse_lu() {
    let s = space("rectangle 0 1 0 1 5 4", 2);
    let params = ModelParams {
        omega: 1.0,
        ..ModelParams::default()
    };
    let asm = Assembler::new(&s, &params, nsk_dg::scheme::project_potential(&s, &params).unwrap(), false);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = asm.len();
    let old: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let new: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let jac = asm.jacobian(Mode::Step { k: 0.01 }, &old, &new).unwrap();
    let (x, y) = (asm.solve(&jac, &rhs).unwrap(), asm.solve_sparse_lu(&jac, &rhs).unwrap());
    let scale = y.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    let diff = x.iter().zip(&y).fold(0.0f64, |a, (u, v)| a.max((u - v).abs()));
    assert!(diff <= 1e-9 * scale, "{diff:e} vs {scale:e}");
    let r = jac.matvec(&x);
    let res = r.iter().zip(&rhs).fold(0.0f64, |a, (u, v)| a.max((u - v).abs()));
    assert!(res <= 1e-10, "{res:e}");
    assert!(asm.dissection().max_front() < s.num_elements());
}

#[test]
fn pure_phases_are_fixed_points() {
    let p = ModelParams::default();
    for phase in [1.0, -1.0] {
        assert!(pure_phase_drift(&space("interval -1 1 6", 1), &p, phase, 10).unwrap() <= 1e-12);
    }
    assert!(pure_phase_drift(&space("disk 1 1", 1), &p, -1.0, 10).unwrap() <= 1e-12);
}

fn run(spec: &str, p: usize, params: &ModelParams, case: &str, steps: usize, k: f64) -> Vec<State> {
    let s = space(spec, p);
    let settings = NewtonSettings::default();
    let s0 = initial_state(&s, params, &case.parse::<Case>().unwrap(), &settings).unwrap();
    Stepper::new(&s, params, &settings)
        .unwrap()
        .advance(&s0, &TimeGrid::uniform(k, steps).unwrap(), |_, _, _| {})
        .unwrap()
}

#[test]
fn random_data_conserves_mass_and_energy_identity() {
    let params = ModelParams::default();
    let traj = run("interval -1 1 64", 1, &params, "random 3 0.05", 20, 0.01);
    let m0 = total_mass(&params, &traj[0]);
    for w in traj.windows(2) {
        assert!(step_energy_deviation(&params, &w[0], &w[1], 0.01).unwrap().abs() <= 1e-8);
        assert!((total_mass(&params, &w[1]) - m0).abs() <= 1e-10 * m0);
        assert!(discrete_energy(&params, &w[1]).unwrap() <= discrete_energy(&params, &w[0]).unwrap() + 1e-12);
    }
}

#[test]
fn perturbed_states_fail_the_energy_audit() {
    let params = ModelParams::default();
    let traj = run("interval -1 1 32", 2, &params, "random 1 0.1", 1, 0.01);
    let mut bad = traj[1].clone();
    for c in bad.phi.as_mut_slice().iter_mut().step_by(3) {
        *c += 1e-3;
    }
    assert!(step_energy_deviation(&params, &traj[0], &bad, 0.01).unwrap().abs() > 1e-6);
}

#[test]
fn rotating_disk_energy_identity() {
    let params = ModelParams {
        omega: 1.0,
        viscosity: Viscosity::Tensor { eta1: 0.001, eta2: 0.005 },
        ..ModelParams::default()
    };
    let traj = run("disk 1 2", 1, &params, "rotating-bubble", 4, 0.01);
    for w in traj.windows(2) {
        assert!(step_energy_deviation(&params, &w[0], &w[1], 0.01).unwrap().abs() <= 1e-8);
    }
}

#[test]
fn equal_densities_use_a_zero_mean_multiplier() {
    let params = ModelParams { rho2: 1.0, ..ModelParams::default() };
    let traj = run("rectangle 0 1 0 1 4 4", 1, &params, "random 2 0.01", 3, 0.01);
    let s = traj.last().unwrap();
    let mesh = s.space().mesh();
    let mean: f64 = (0..mesh.num_elements()).map(|k| mesh.volume(k).sqrt() * s.lambda.modes(k, 0)[0]).sum();
    assert!(mean.abs() < 1e-12);
}
