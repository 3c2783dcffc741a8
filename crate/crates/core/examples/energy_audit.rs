//! Drives the stepper directly and checks the discrete energy equality and
//! mass after every step.
use std::sync::Arc;

use nsk_dg::dgspace::DgSpace;
use nsk_dg::diagnostics::{discrete_energy, step_dissipation, step_energy_deviation, total_mass};
use nsk_dg::mesh::Mesh;
use nsk_dg::model::ModelParams;
use nsk_dg::scheme::{initial_state, Case, NewtonSettings, Stepper};

fn main() -> nsk_dg::Result<()> {
    let mesh = Mesh::build(&"interval -1 1 64".parse().map_err(nsk_dg::Error::InvalidSpec)?)?;
    let space = DgSpace::new(Arc::new(mesh), 2)?;
    let params = ModelParams::default();
    let settings = NewtonSettings::default();
    let mut state = initial_state(&space, &params, &Case::Random { seed: 7, amplitude: 0.05 }, &settings)?;
    let stepper = Stepper::new(&space, &params, &settings)?;
    let k = 0.01;
    for _ in 0..20 {
        let (new, newton) = stepper.step(&state, k)?;
        let d = step_dissipation(&params, &state, &new, k)?;
        println!(
            "step {:2}: E = {:.10e} dissipation = {:.3e} deviation = {:.1e} mass = {:.12} newton = {}",
            new.step,
            discrete_energy(&params, &new)?,
            d.iter().sum::<f64>(),
            step_energy_deviation(&params, &state, &new, k)?,
            total_mass(&params, &new),
            newton.iterations()
        );
        state = new;
    }
    Ok(())
}
