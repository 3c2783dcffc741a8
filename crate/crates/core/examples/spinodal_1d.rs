//! Spinodal decomposition from small random data in 1D: energy, mass and
//! dissipation split every 10 steps.
use nsk_dg::cli::{simulate, RunConfig, TestCase};

fn main() -> nsk_dg::Result<()> {
    let mut c = RunConfig::defaults(TestCase::Test2);
    c.mesh = "interval -1 1 256".parse().unwrap();
    c.t_final = 2.0;
    println!("{:>5} {:>8} {:>14} {:>14} {:>10} {:>10}", "step", "t", "energy", "mass", "deviation", "max phi");
    let s = simulate(&c, |_, _, r| {
        if r.step % 10 == 0 {
            println!("{:5} {:8.3} {:14.8e} {:14.8e} {:10.2e} {:10.5}", r.step, r.t, r.energy, r.mass, r.deviation, r.max_phi);
        }
        Ok(())
    })?;
    println!("max energy increase {:.3e}, mass drift {:.3e}", s.max_energy_increase(), s.relative_mass_drift());
    Ok(())
}
