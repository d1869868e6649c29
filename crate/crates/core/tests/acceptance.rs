//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rydberg_gates::budget::{
    avg_dwell, blockade_error, decay_error, dwell_table, gate_time, sweep, SweepSpec, Temperature,
};
use rydberg_gates::evolve::{evolve, residue_blockade_loss, Decay, SimulationOptions};
use rydberg_gates::ideal::FidelityMode;
use rydberg_gates::model::{CcInteraction, PhysicalParams};
use rydberg_gates::schedule::{
    cnot_schedule, deutsch_schedule, phase_phi, theta_components, theta_from_omegas,
    theta_from_ratio, toffoli_schedule, DriveParams, RATIO_MAX, RATIO_MIN,
};
use rydberg_gates::units::mhz;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    ((x - target) / target).abs() <= rel
}

fn angle_formula() -> Outcome {
    let theta = theta_from_omegas(1.0, 2.0).map_err(|e| e.to_string())?;
    let (s, c) = (theta.sin(), theta.cos());
    let (rs, rc) = theta_components(1.0, 2.0);
    let err = [
        (s - 0.28).abs(),
        (c - 0.96).abs(),
        (rs - 0.28).abs(),
        (rc - 0.96).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    check(
        err <= 1e-12,
        format!("theta = {theta:.15}, sin = {s:.15}, cos = {c:.15}, max err {err:.1e}"),
    )
}

fn tunability() -> Outcome {
    let lo = theta_from_ratio(RATIO_MIN).map_err(|e| e.to_string())?;
    let hi = theta_from_ratio(RATIO_MAX).map_err(|e| e.to_string())?;
    let n = 1000;
    let thetas: Vec<f64> = (0..n)
        .map(|k| RATIO_MIN + (RATIO_MAX - RATIO_MIN) * k as f64 / (n - 1) as f64)
        .map(|r| theta_from_ratio(r).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let monotone = thetas.windows(2).all(|w| w[1] < w[0]);
    check(
        (lo - PI).abs() <= 1e-9 && hi.abs() <= 1e-9 && monotone,
        format!("theta(sqrt2-1) - pi = {:.1e}, theta(sqrt2+1) = {hi:.1e}, strictly decreasing on {n} points: {monotone}", lo - PI),
    )
}

fn sweep_minima() -> Outcome {
    let result =
        sweep(&SweepSpec::default(), &PhysicalParams::cs84p(3)).map_err(|e| e.to_string())?;
    let cold = result.minimum(Temperature::Cryogenic);
    let warm = result.minimum(Temperature::Room);
    let ok = within(cold.total, 6.7e-3, 0.10)
        && (cold.omega_bar_mhz - 0.54).abs() <= 0.02 + 1e-9
        && within(warm.total, 18e-3, 0.10)
        && (warm.omega_bar_mhz - 0.92).abs() <= 0.02 + 1e-9;
    check(
        ok,
        format!(
            "4.2K min {:.4e} at {:.2} MHz; 300K min {:.4e} at {:.2} MHz ({} grid points)",
            cold.total,
            cold.omega_bar_mhz,
            warm.total,
            warm.omega_bar_mhz,
            result.rows.len()
        ),
    )
}

fn gate_time_check() -> Outcome {
    // T_g = 2π(1/Ω₀ + 2/Ω̄ + 1/(√2Ω₃)) with Ω₃ = Ω̄/√2, in MHz: 1/10 + 2/0.54 + 1/0.54.
    let hand = 0.1 + 3.0 / 0.54;
    let drive = DriveParams::reference(0.54).map_err(|e| e.to_string())?;
    let tg = gate_time(&drive);
    check(
        within(tg, 5.656, 1e-3) && within(tg, hand, 1e-12),
        format!("T_g = {tg:.6} us, hand arithmetic {hand:.6} us"),
    )
}

fn phase_matching() -> Outcome {
    let v = PhysicalParams::cs84p(3).blockade_shift();
    let phi1 = phase_phi(&DriveParams::reference(0.32).map_err(|e| e.to_string())?, v);
    let phi2 = phase_phi(&DriveParams::reference(0.64).map_err(|e| e.to_string())?, v);
    check(
        within(phi1, 4.0 * PI, 0.01) && within(phi2, TAU, 0.01),
        format!(
            "phi(0.32) = {:.4} pi, phi(0.64) = {:.4} pi",
            phi1 / PI,
            phi2 / PI
        ),
    )
}

fn dwell_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let drive = DriveParams::new(
            mhz(rng.gen_range(1.0..20.0)),
            mhz(rng.gen_range(0.05..3.0)),
            mhz(rng.gen_range(0.05..3.0)),
            mhz(rng.gen_range(0.05..3.0)),
        )
        .map_err(|e| e.to_string())?;
        let table = dwell_table(&drive);
        let mean = table.iter().sum::<f64>() / table.len() as f64;
        worst = worst.max((avg_dwell(&drive) - mean).abs() / mean.max(1.0));
    }
    check(
        worst <= 1e-12,
        format!("max |avg_dwell - mean(dwell_table)| = {worst:.2e} over 100 seeded drives"),
    )
}

fn convergence() -> Outcome {
    let drive = DriveParams::reference(0.54).map_err(|e| e.to_string())?;
    let cases = [
        ("deutsch", deutsch_schedule(&drive), 3),
        ("toffoli", toffoli_schedule(&drive), 3),
        ("cnot", cnot_schedule(&drive), 2),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, schedule, n) in cases {
        let schedule = schedule.map_err(|e| e.to_string())?;
        let params = PhysicalParams::cs84p(n);
        let infid: Vec<f64> = [10.0, 100.0, 1000.0]
            .into_iter()
            .map(|v_scale| {
                let opts = SimulationOptions {
                    v_scale,
                    cc_interaction: CcInteraction::None,
                    frame_correction: true,
                    track_dwell: false,
                    ..Default::default()
                };
                evolve(&schedule, &params, &opts)
                    .and_then(|r| r.fidelity(FidelityMode::StateAverage))
                    .map(|f| 1.0 - f)
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<_, _>>()?;
        ok &= infid.windows(2).all(|w| w[1] < w[0]) && infid[2] < 1e-4;
        parts.push(format!(
            "{name} {:.1e}/{:.1e}/{:.1e}",
            infid[0], infid[1], infid[2]
        ));
    }
    check(
        ok,
        format!(
            "infidelity at V x10/x100/x1000 (cc none): {}",
            parts.join(", ")
        ),
    )
}

fn cross_checks() -> Outcome {
    let params = PhysicalParams::cs84p(3);
    let v = params.blockade_shift();
    let drive = DriveParams::reference(0.54).map_err(|e| e.to_string())?;
    let schedule = deutsch_schedule(&drive).map_err(|e| e.to_string())?;
    let fast = SimulationOptions {
        track_dwell: false,
        ..Default::default()
    };

    let plain = evolve(&schedule, &params, &fast).map_err(|e| e.to_string())?;
    let transfer = plain
        .transition_probability("010", "011")
        .map_err(|e| e.to_string())?;
    let (t, tp) = (TAU / drive.omega_bar(), SQRT_2 * PI / drive.omega3);
    let predicted = (drive.omega1 * drive.omega2 * t / (2.0 * v)).sin().powi(2)
        + (drive.omega3 * drive.omega3 * tp / (4.0 * v)).sin().powi(2);

    let residue = residue_blockade_loss(&schedule, &params, &fast).map_err(|e| e.to_string())?;
    let e_bl = blockade_error(v, drive.omega0);

    let decayed = SimulationOptions {
        decay: Decay::Effective { tau_us: 1590.0 },
        ..fast
    };
    let loss = evolve(&schedule, &params, &decayed)
        .map_err(|e| e.to_string())?
        .mean_norm_loss();
    let e_decay = decay_error(&drive, 1590.0);

    check(
        within(transfer, predicted, 0.20) && within(residue, e_bl, 0.20) && within(loss, e_decay, 0.10),
        format!(
            "|010> transfer {transfer:.3e} vs {predicted:.3e}; |00b> blockade loss {residue:.3e} vs {e_bl:.3e}; \
             norm loss {loss:.3e} vs E_decay {e_decay:.3e}"
        ),
    )
}

fn unitarity() -> Outcome {
    let params = PhysicalParams::cs84p(3);
    let spec = SweepSpec::default();
    let opts = SimulationOptions {
        track_dwell: false,
        ..Default::default()
    };
    let mut worst: f64 = 0.0;
    let grid = spec.grid();
    for &omega_bar_mhz in &grid {
        let drive = spec.drive_at(omega_bar_mhz).map_err(|e| e.to_string())?;
        let schedule = deutsch_schedule(&drive).map_err(|e| e.to_string())?;
        let result = evolve(&schedule, &params, &opts).map_err(|e| e.to_string())?;
        worst = worst.max(result.unitarity_defect());
    }
    check(
        worst < 1e-9,
        format!(
            "max ||U^dag U - I||_max = {worst:.2e} over {} grid points",
            grid.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("angle formula", angle_formula),
        ("tunability endpoints", tunability),
        ("error-budget minima", sweep_minima),
        ("gate time", gate_time_check),
        ("phase matching", phase_matching),
        ("dwell identity", dwell_identity),
        ("blockade-limit convergence", convergence),
        ("numeric vs analytic cross-checks", cross_checks),
        ("unitarity over sweep grid", unitarity),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {}. {name}: {detail} ({secs:.2}s)", k + 1);
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
