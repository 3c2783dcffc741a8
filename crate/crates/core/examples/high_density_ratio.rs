//! Density ratios 10 and 100 with the modified double well: the overshoot of
//! phi stays small and the density positive.
use nsk_dg::cli::{simulate, RunConfig, TestCase};
use nsk_dg::model::Well;

fn main() -> nsk_dg::Result<()> {
    for ratio in [10.0, 100.0] {
        let mut c = RunConfig::defaults(TestCase::Test6);
        c.params.rho2 = ratio;
        c.params.well = Well::Modified { a: ratio * ratio };
        let s = simulate(&c, |_, _, _| Ok(()))?;
        println!("rho2/rho1 = {ratio:>5}: max phi {:.5}, min density {:.4e}, max newton its {}", s.max_phi(), s.min_density(), s.max_newton_iterations);
    }
    Ok(())
}
