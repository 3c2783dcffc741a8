//! Run configuration, drivers for the shipped cases and file output.

pub mod config;
pub mod driver;
pub mod output;

pub use config::{parse_config, parse_config_with_out, RunConfig, TestCase, TimeStep};
pub use driver::{run_checks, run_convergence, run_simulation, simulate, CheckOutcome, RunSummary};
pub use output::{write_field_snapshot, ConvergenceRow, SnapshotFormat};
