//! Propagates the Deutsch gate at the physical blockade and reports what went wrong where.
//!
//! cargo run --release --example simulate_deutsch [omega_bar_MHz]

use rydberg_gates::budget::{budget_with_lifetime, dwell_table};
use rydberg_gates::evolve::{evolve, Decay, SimulationOptions};
use rydberg_gates::ideal::FidelityMode;
use rydberg_gates::model::PhysicalParams;
use rydberg_gates::schedule::{deutsch_schedule, DriveParams};

fn main() -> rydberg_gates::Result<()> {
    let omega_bar_mhz = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(0.54);
    let drive = DriveParams::reference(omega_bar_mhz)?;
    let params = PhysicalParams::cs84p(3);
    let schedule = deutsch_schedule(&drive)?;

    let result = evolve(&schedule, &params, &SimulationOptions::default())?;
    println!(
        "Omega_bar/2pi = {omega_bar_mhz} MHz, T_g = {:.4} us",
        schedule.total_duration()
    );
    println!(
        "trace fidelity         {:.6}",
        result.fidelity(FidelityMode::Trace)?
    );
    println!(
        "state-average fidelity {:.6}",
        result.fidelity(FidelityMode::StateAverage)?
    );
    println!("frame phase phi        {:.6} rad\n", result.phase_phi);

    let dwell = result.dwell.clone().unwrap_or_default();
    println!(
        "{:>6} {:>11} {:>10} {:>10}",
        "input", "leakage", "dwell us", "table us"
    );
    for (k, label) in result.inputs.iter().enumerate() {
        println!(
            "{label:>6} {:>11.3e} {:>10.5} {:>10.5}",
            result.leakage[k],
            dwell[k],
            dwell_table(&drive)[k]
        );
    }

    let decayed = SimulationOptions {
        decay: Decay::Effective { tau_us: 1590.0 },
        track_dwell: false,
        ..Default::default()
    };
    let loss = evolve(&schedule, &params, &decayed)?.mean_norm_loss();
    let budget = budget_with_lifetime(&drive, params.blockade_shift(), 1590.0);
    println!(
        "\nmean norm loss (tau = 1590 us) {loss:.4e}, analytic E_decay {:.4e}",
        budget.decay
    );
    Ok(())
}
