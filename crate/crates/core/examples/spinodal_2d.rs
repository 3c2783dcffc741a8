//! Random data on a coarse square, with VTK snapshots.
//!
//!     cargo run --release --example spinodal_2d -- [OUT_DIR]
use std::path::PathBuf;

use nsk_dg::cli::{run_simulation, RunConfig, TestCase};

fn main() -> nsk_dg::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("out/spinodal_2d"), PathBuf::from);
    let mut c = RunConfig::defaults(TestCase::Test2);
    c.mesh = "rectangle -1 1 -1 1 16 16".parse().unwrap();
    c.t_final = 0.5;
    c.snapshot_every = 10;
    let s = run_simulation(&c, &out)?;
    println!("{} steps, energy {:.6e} -> {:.6e}, output in {}", s.steps(), s.reports[0].energy, s.reports.last().unwrap().energy, out.display());
    Ok(())
}
