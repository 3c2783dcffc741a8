//! Stationary tanh profile held on [-1, 1]. Prints the drift of phi and the
//! largest velocity seen.
use nsk_dg::cli::{simulate, RunConfig, TestCase};

fn main() -> nsk_dg::Result<()> {
    let mut c = RunConfig::defaults(TestCase::Test1);
    c.t_final = 0.2;
    let mut first = None;
    let s = simulate(&c, |state, _, _| {
        first.get_or_insert_with(|| state.phi.clone());
        Ok(())
    })?;
    let first = first.unwrap();
    let drift = s.final_state.phi.as_slice().iter().zip(first.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("{} steps, max coefficient drift {drift:.3e}, max |v| {:.3e}", s.steps(), s.max_velocity());
    Ok(())
}
