//! Deutsch, Toffoli and CNOT pulse schedules.
//!
//! The Deutsch sequence is five segments: a π pulse exciting `g0 → r` on
//! both controls, two 2π pulses on the target's Λ system `g0 ↔ r ↔ g1` with
//! Rabi magnitudes `(Ω₁, Ω₂)` then swapped, a 2π pulse with `(Ω₃, −Ω₃)`,
//! and a π pulse with `−Ω₀` returning the controls. Dropping the two Λ
//! pulses gives the Toffoli gate; the CNOT uses one control and the
//! `(Ω₃, −Ω₃)` pulse alone.

use std::f64::consts::{PI, SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{GateKind, GateSchedule, PulseSegment, Transition};
use crate::qcore::{Level, C64, I};
use crate::units::mhz;

/// Lower end of the tunable ratio interval, `√2 − 1` (θ = π).
pub const RATIO_MIN: f64 = SQRT_2 - 1.0;
/// Upper end of the tunable ratio interval, `√2 + 1` (θ = 0).
pub const RATIO_MAX: f64 = SQRT_2 + 1.0;

const BISECTION_TOL: f64 = 1e-12;

/// Drive amplitudes, all real magnitudes in rad/μs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    /// Control π pulses.
    pub omega0: f64,
    /// Target `g0 ↔ r` in the first Λ pulse.
    pub omega1: f64,
    /// Target `g1 ↔ r` in the first Λ pulse.
    pub omega2: f64,
    /// Target pulse with opposite-sign couplings.
    pub omega3: f64,
}

impl DriveParams {
    pub fn new(omega0: f64, omega1: f64, omega2: f64, omega3: f64) -> Result<Self> {
        for (name, v) in [
            ("omega0", omega0),
            ("omega1", omega1),
            ("omega2", omega2),
            ("omega3", omega3),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            omega0,
            omega1,
            omega2,
            omega3,
        })
    }

    /// Builds `(Ω₁, Ω₂)` from `Ω̄` and `r = Ω₂/Ω₁`.
    pub fn from_ratio(omega0: f64, omega_bar: f64, ratio: f64, omega3: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio.is_finite()) || !(omega_bar > 0.0) {
            return Err(Error::Domain(format!(
                "need positive ratio and omega_bar, got {ratio}, {omega_bar}"
            )));
        }
        let omega1 = omega_bar / (1.0 + ratio * ratio).sqrt();
        Self::new(omega0, omega1, ratio * omega1, omega3)
    }

    /// Builds `(Ω₁, Ω₂)` realizing angle `theta` at the given `Ω̄`.
    pub fn from_theta(omega0: f64, theta: f64, omega_bar: f64, omega3: f64) -> Result<Self> {
        let (omega1, omega2) = omegas_from_theta(theta, omega_bar)?;
        Self::new(omega0, omega1, omega2, omega3)
    }

    /// Working point used throughout: `Ω₀/2π = 10 MHz`, `Ω₂/Ω₁ = 2`,
    /// `Ω₃ = Ω̄/√2`, with `Ω̄/2π` given in MHz.
    pub fn reference(omega_bar_mhz: f64) -> Result<Self> {
        let omega_bar = mhz(omega_bar_mhz);
        Self::from_ratio(mhz(10.0), omega_bar, 2.0, omega_bar / SQRT_2)
    }

    /// `Ω̄ = √(Ω₁² + Ω₂²)`.
    pub fn omega_bar(&self) -> f64 {
        self.omega1.hypot(self.omega2)
    }

    pub fn ratio(&self) -> f64 {
        self.omega2 / self.omega1
    }

    pub fn theta(&self) -> f64 {
        theta_from_omegas(self.omega1, self.omega2).expect("validated drive")
    }

    /// Same ratios with every Rabi frequency multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.omega0 * factor,
            self.omega1 * factor,
            self.omega2 * factor,
            self.omega3 * factor,
        )
    }
}

/// `(sin θ, cos θ)` as rational functions of the two Λ couplings.
pub fn theta_components(omega1: f64, omega2: f64) -> (f64, f64) {
    let (a2, b2) = (omega1 * omega1, omega2 * omega2);
    let bar4 = (a2 + b2) * (a2 + b2);
    let sin = (6.0 * a2 * b2 - (a2 * a2 + b2 * b2)) / bar4;
    let cos = 4.0 * omega1 * omega2 * (b2 - a2) / bar4;
    (sin, cos)
}

/// Deutsch-gate angle produced by the two Λ pulses.
///
/// Lies in `[0, π]` for `Ω₂/Ω₁ ∈ [√2−1, √2+1]`, decreasing from π to 0. Outside
/// that interval `sin θ < 0` and the signed angle in `(−π, 0)` is returned.
pub fn theta_from_omegas(omega1: f64, omega2: f64) -> Result<f64> {
    if !(omega1 > 0.0 && omega2 > 0.0) {
        return Err(Error::Domain(format!(
            "Rabi frequencies must be positive, got {omega1}, {omega2}"
        )));
    }
    let (sin, cos) = theta_components(omega1, omega2);
    let theta = sin.atan2(cos);
    // rounding at the two endpoints, where sin θ passes through zero
    Ok(if theta < -PI + 1e-12 {
        PI
    } else if theta < 0.0 && theta > -1e-12 {
        0.0
    } else {
        theta
    })
}

pub fn theta_from_ratio(ratio: f64) -> Result<f64> {
    theta_from_omegas(1.0, ratio)
}

/// Bisection for a root of a monotone `f` on `[lo, hi]`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (mut f_lo, f_hi) = (f(lo), f(hi));
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Numerical("root is not bracketed".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Ratio `r = Ω₂/Ω₁ ∈ [√2−1, √2+1]` giving angle `theta`.
pub fn ratio_from_theta(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!(
            "theta must lie in [0, pi], got {theta}"
        )));
    }
    if theta == PI {
        return Ok(RATIO_MIN);
    }
    if theta == 0.0 {
        return Ok(RATIO_MAX);
    }
    bisect(
        |r| theta_from_ratio(r).expect("positive ratio") - theta,
        RATIO_MIN,
        RATIO_MAX,
        BISECTION_TOL,
    )
}

/// `(Ω₁, Ω₂)` with `√(Ω₁²+Ω₂²) = omega_bar` realizing `theta`.
pub fn omegas_from_theta(theta: f64, omega_bar: f64) -> Result<(f64, f64)> {
    if !(omega_bar > 0.0 && omega_bar.is_finite()) {
        return Err(Error::Domain(format!(
            "omega_bar must be positive, got {omega_bar}"
        )));
    }
    let r = ratio_from_theta(theta)?;
    let omega1 = omega_bar / (1.0 + r * r).sqrt();
    Ok((omega1, r * omega1))
}

fn control_pulse(label: &str, rabi: f64, controls: &[usize]) -> Result<PulseSegment> {
    let transitions = controls
        .iter()
        .map(|&atom| Transition::new(atom, Level::G0, C64::new(rabi, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    PulseSegment::new(label, transitions, PI / rabi.abs())
}

fn target_pulse(
    label: &str,
    target: usize,
    from_g0: C64,
    from_g1: C64,
    duration: f64,
) -> Result<PulseSegment> {
    PulseSegment::new(
        label,
        vec![
            Transition::new(target, Level::G0, from_g0)?,
            Transition::new(target, Level::G1, from_g1)?,
        ],
        duration,
    )
}

fn opposite_phase_pulse(label: &str, target: usize, omega3: f64) -> Result<PulseSegment> {
    target_pulse(
        label,
        target,
        C64::new(omega3, 0.0),
        C64::new(-omega3, 0.0),
        SQRT_2 * PI / omega3,
    )
}

/// Five-segment Deutsch schedule on `(control 1, control 2, target)`.
pub fn deutsch_schedule(drive: &DriveParams) -> Result<GateSchedule> {
    let (o0, o1, o2, o3) = (drive.omega0, drive.omega1, drive.omega2, drive.omega3);
    let lambda_time = TAU / drive.omega_bar();
    let segments = vec![
        control_pulse("controls g0->r", o0, &[0, 1])?,
        target_pulse(
            "target lambda (O1, iO2)",
            2,
            C64::new(o1, 0.0),
            I * o2,
            lambda_time,
        )?,
        target_pulse(
            "target lambda (O2, iO1)",
            2,
            C64::new(o2, 0.0),
            I * o1,
            lambda_time,
        )?,
        opposite_phase_pulse("target (O3, -O3)", 2, o3)?,
        control_pulse("controls r->g0", -o0, &[0, 1])?,
    ];
    GateSchedule::new(
        GateKind::Deutsch {
            theta: drive.theta(),
        },
        3,
        segments,
    )
}

/// Deutsch schedule without the two Λ pulses.
pub fn toffoli_schedule(drive: &DriveParams) -> Result<GateSchedule> {
    let mut segments = deutsch_schedule(drive)?.segments;
    segments.drain(1..3);
    GateSchedule::new(GateKind::Toffoli, 3, segments)
}

/// Three-segment CNOT on `(control, target)`.
pub fn cnot_schedule(drive: &DriveParams) -> Result<GateSchedule> {
    let segments = vec![
        control_pulse("control g0->r", drive.omega0, &[0])?,
        opposite_phase_pulse("target (O3, -O3)", 1, drive.omega3)?,
        control_pulse("control r->g0", -drive.omega0, &[0])?,
    ];
    GateSchedule::new(GateKind::Cnot, 2, segments)
}

pub fn schedule_for(kind: &str, drive: &DriveParams) -> Result<GateSchedule> {
    match kind {
        "deutsch" => deutsch_schedule(drive),
        "toffoli" => toffoli_schedule(drive),
        "cnot" => cnot_schedule(drive),
        other => Err(Error::Config(format!("unknown gate {other:?}"))),
    }
}

/// Duration of pulses 2–4, `2π(2/Ω̄ + 1/(√2Ω₃))`.
pub fn inner_pulse_time(drive: &DriveParams) -> f64 {
    TAU * (2.0 / drive.omega_bar() + 1.0 / (SQRT_2 * drive.omega3))
}

/// Phase `φ = −T₂₃₄·V/64` picked up by `|rrβ⟩` while the target is driven.
pub fn phase_phi(drive: &DriveParams, v: f64) -> f64 {
    -inner_pulse_time(drive) * v / 64.0
}

/// `Ω̄` making `|φ| = 2Nπ` under `Ω₃ = Ω̄/√2`.
///
/// There `T₂₃₄ = 6π/Ω̄`, so `Ω̄ = 3|V|/(64N)`. The sign of φ follows `−V`.
pub fn solve_phase_matching(n: u32, v: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("phase-matching index must be >= 1".into()));
    }
    if v == 0.0 || !v.is_finite() {
        return Err(Error::Domain(format!(
            "blockade shift must be finite and non-zero, got {v}"
        )));
    }
    Ok(3.0 * v.abs() / (64.0 * n as f64))
}
