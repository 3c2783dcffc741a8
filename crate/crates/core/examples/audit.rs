//! The property suite of `nsk-dg check`.
fn main() -> nsk_dg::Result<()> {
    let outcomes = nsk_dg::cli::run_checks()?;
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    println!("{failed} of {} failed", outcomes.len());
    Ok(())
}
