//! Four bubbles merging and relaxing in the unit square.
//!
//!     cargo run --release --example bubbles -- [OUT_DIR]
use std::path::PathBuf;

use nsk_dg::cli::{run_simulation, RunConfig, TestCase};

fn main() -> nsk_dg::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("out/bubbles"), PathBuf::from);
    let mut c = RunConfig::defaults(TestCase::Test3);
    c.mesh = "rectangle 0 1 0 1 20 20".parse().unwrap();
    c.t_final = 0.3;
    c.snapshot_every = 10;
    let s = run_simulation(&c, &out)?;
    println!("max |v| {:.3e} (parasitic currents), max |deviation| {:.2e}", s.max_velocity(), s.max_abs_deviation());
    Ok(())
}
