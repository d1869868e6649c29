//! Infidelity against the ideal gates as the blockade shift grows.
//!
//! The control–control residue is switched off so the gates converge to
//! their ideal form; with it on, the Deutsch gate stalls near 2e-4.
//!
//! cargo run --release --example blockade_convergence

use rydberg_gates::evolve::{evolve, SimulationOptions};
use rydberg_gates::ideal::FidelityMode;
use rydberg_gates::model::{CcInteraction, PhysicalParams};
use rydberg_gates::schedule::{cnot_schedule, deutsch_schedule, toffoli_schedule, DriveParams};

fn main() -> rydberg_gates::Result<()> {
    let drive = DriveParams::reference(0.54)?;
    let gates = [
        (deutsch_schedule(&drive)?, 3),
        (toffoli_schedule(&drive)?, 3),
        (cnot_schedule(&drive)?, 2),
    ];
    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>14}",
        "V scale", "deutsch", "toffoli", "cnot", "deutsch (cc)"
    );
    for v_scale in [1.0, 10.0, 100.0, 1000.0] {
        let mut row = format!("{v_scale:>8}");
        for cc in [CcInteraction::None, CcInteraction::Physical] {
            let take = if cc == CcInteraction::None {
                gates.len()
            } else {
                1
            };
            for (schedule, n) in gates.iter().take(take) {
                let opts = SimulationOptions {
                    v_scale,
                    cc_interaction: cc,
                    track_dwell: false,
                    ..Default::default()
                };
                let f = evolve(schedule, &PhysicalParams::cs84p(*n), &opts)?
                    .fidelity(FidelityMode::StateAverage)?;
                row += &format!(" {:>12.3e}", 1.0 - f);
            }
        }
        println!("{row}");
    }
    Ok(())
}
