//! Errors against the stationary tanh profile with k = h^2.
//!
//!     cargo run --release --example convergence_table -- [DEGREE] [LEVELS]
//!     cargo run --release --example convergence_table -- 2 32,64,128,256
use nsk_dg::cli::output::convergence_csv;
use nsk_dg::cli::{run_convergence, RunConfig, TestCase};

fn main() -> nsk_dg::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let mut c = RunConfig::defaults(TestCase::Test1);
    c.degree = args.get(1).map_or(1, |s| s.parse().expect("degree"));
    c.t_final = 0.01;
    let levels: Vec<usize> = args.get(2).map_or("16,32,64,128", |s| s).split(',').map(|s| s.parse().expect("level")).collect();
    print!("{}", convergence_csv(&run_convergence(&c, &levels, None)?));
    Ok(())
}
