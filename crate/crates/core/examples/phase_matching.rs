//! Ω̄ values at which the control–control residue phase is a multiple of 2π.
//!
//! cargo run --example phase_matching

use std::f64::consts::PI;

use rydberg_gates::budget::budget_with_lifetime;
use rydberg_gates::model::PhysicalParams;
use rydberg_gates::schedule::{phase_phi, solve_phase_matching, DriveParams};
use rydberg_gates::units::to_mhz;

fn main() -> rydberg_gates::Result<()> {
    let v = PhysicalParams::cs84p(3).blockade_shift();
    println!("V/2pi = {:.4} MHz\n", to_mhz(v));
    println!(
        "{:>3} {:>14} {:>10} {:>12}",
        "N", "Omega_bar MHz", "phi/pi", "E (4.2 K)"
    );
    for n in 1..=4 {
        let omega_bar_mhz = to_mhz(solve_phase_matching(n, v)?);
        let drive = DriveParams::reference(omega_bar_mhz)?;
        let total = budget_with_lifetime(&drive, v, 1590.0).total;
        println!(
            "{n:>3} {omega_bar_mhz:>14.5} {:>10.5} {total:>12.4e}",
            phase_phi(&drive, v) / PI
        );
    }
    Ok(())
}
