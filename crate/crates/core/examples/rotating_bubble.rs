//! Off-centre bubble in a rotating disk with the full viscous stress. The
//! energy includes the centrifugal potential.
use nsk_dg::cli::{simulate, RunConfig, TestCase};

fn main() -> nsk_dg::Result<()> {
    let mut c = RunConfig::defaults(TestCase::Test4);
    c.mesh = "disk 1 6".parse().unwrap();
    c.t_final = 0.2;
    let s = simulate(&c, |_, _, r| {
        println!("t = {:.2} E = {:.10e} deviation = {:.2e}", r.t, r.energy, r.deviation);
        Ok(())
    })?;
    println!("omega = {}, mass drift {:.3e}", c.params.omega, s.relative_mass_drift());
    Ok(())
}
