//! Heavy fluid above light fluid under gravity.
//!
//!     cargo run --release --example rayleigh_taylor -- [OUT_DIR]
use std::path::PathBuf;

use nsk_dg::cli::{run_simulation, RunConfig, TestCase};

fn main() -> nsk_dg::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("out/rayleigh_taylor"), PathBuf::from);
    let mut c = RunConfig::defaults(TestCase::Test5);
    c.mesh = "rectangle -1 1 -2 2 10 20".parse().unwrap();
    c.t_final = 0.5;
    c.snapshot_every = 10;
    let s = run_simulation(&c, &out)?;
    println!("gravity {:?}, max |v| {:.3e}, output in {}", c.params.gravity, s.max_velocity(), out.display());
    Ok(())
}
