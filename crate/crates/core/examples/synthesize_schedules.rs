//! Lists the Deutsch, Toffoli and CNOT pulse schedules at the reference drive.
//!
//! cargo run --example synthesize_schedules

use rydberg_gates::model::GateSchedule;
use rydberg_gates::schedule::{cnot_schedule, deutsch_schedule, toffoli_schedule, DriveParams};
use rydberg_gates::units::to_mhz;

fn show(schedule: &GateSchedule) {
    println!(
        "{} ({} atoms, {:.4} us)",
        schedule.kind.name(),
        schedule.n_atoms,
        schedule.total_duration()
    );
    for seg in &schedule.segments {
        println!("  {:<28} {:>8.4} us", seg.label, seg.duration);
        for t in &seg.transitions {
            println!(
                "    atom {} {}<->r  {:>9.5} MHz  arg {:+.4}",
                t.atom,
                t.lower,
                to_mhz(t.rabi.norm()),
                t.rabi.arg()
            );
        }
    }
}

fn main() -> rydberg_gates::Result<()> {
    let drive = DriveParams::reference(0.54)?;
    println!(
        "theta = {:.6} rad, sin theta = {:.6}\n",
        drive.theta(),
        drive.theta().sin()
    );
    for schedule in [
        deutsch_schedule(&drive)?,
        toffoli_schedule(&drive)?,
        cnot_schedule(&drive)?,
    ] {
        show(&schedule);
        println!();
    }
    Ok(())
}
