//! Error budget versus Ω̄ at 4.2 K and 300 K, written as CSV.
//!
//! cargo run --example error_budget_sweep > sweep.csv

use rydberg_gates::budget::{sweep, SweepSpec, Temperature};
use rydberg_gates::cli::sweep_csv;
use rydberg_gates::model::PhysicalParams;

fn main() -> rydberg_gates::Result<()> {
    let result = sweep(&SweepSpec::default(), &PhysicalParams::cs84p(3))?;
    print!("{}", sweep_csv(&result)?);
    for t in [Temperature::Cryogenic, Temperature::Room] {
        let m = result.minimum(t);
        eprintln!(
            "{t}: minimum {:.4e} at Omega_bar/2pi = {:.2} MHz",
            m.total, m.omega_bar_mhz
        );
    }
    Ok(())
}
