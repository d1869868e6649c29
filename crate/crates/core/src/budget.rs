//! Closed-form error budget of the Deutsch protocol and parameter sweeps.
//!
//! Three mechanisms are counted: Rydberg decay during the average dwell
//! time, incomplete double excitation of the controls caused by their
//! residual `V/64` shift, and two-photon leakage through the far-detuned
//! blockaded levels while the target is driven.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PhysicalParams;
use crate::schedule::{phase_phi, DriveParams};
use crate::units::{mhz, to_mhz};

/// Upper edge of the swept `Ω̄/2π` range, MHz.
pub const MAX_OMEGA_BAR_MHZ: f64 = 2.3;
pub const DEFAULT_GRID_STEP_MHZ: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Temperature {
    #[serde(rename = "4.2K")]
    Cryogenic,
    #[serde(rename = "300K")]
    Room,
}

impl Temperature {
    /// Lifetime of the Cs 84p₃/₂ Rydberg level in μs.
    pub fn lifetime_us(self) -> f64 {
        match self {
            Temperature::Cryogenic => 1590.0,
            Temperature::Room => 313.0,
        }
    }
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Temperature::Cryogenic => "4.2K",
            Temperature::Room => "300K",
        })
    }
}

impl FromStr for Temperature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "4.2K" | "4.2" | "4K" => Ok(Temperature::Cryogenic),
            "300K" | "300" => Ok(Temperature::Room),
            other => Err(Error::Config(format!(
                "temperature must be 4.2K or 300K, got {other:?}"
            ))),
        }
    }
}

/// Denominator used for the `|00β⟩` two-photon couplings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoPhotonDenominator {
    /// `4V`, dropping the `V/32` correction.
    #[default]
    Simplified,
    /// `4V + V/32`.
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub gate_time_us: f64,
    pub t_x_us: f64,
    pub avg_dwell_us: f64,
    pub phi: f64,
    pub decay: f64,
    pub blockade: f64,
    pub two_photon: f64,
    pub total: f64,
}

/// `T_g = 2π(1/Ω₀ + 2/Ω̄ + 1/(√2Ω₃))`.
pub fn gate_time(drive: &DriveParams) -> f64 {
    TAU * (1.0 / drive.omega0 + 2.0 / drive.omega_bar() + 1.0 / (SQRT_2 * drive.omega3))
}

/// Dwell of an input with a single excited control: `π/Ω₀ + 4π/Ω̄ + √2π/Ω₃`.
pub fn t_x(drive: &DriveParams) -> f64 {
    PI / drive.omega0 + 2.0 * TAU / drive.omega_bar() + SQRT_2 * PI / drive.omega3
}

/// Time in Rydberg states per computational input, in qubit order.
pub fn dwell_table(drive: &DriveParams) -> [f64; 8] {
    let tx = t_x(drive);
    let (o1, o2, ob) = (drive.omega1, drive.omega2, drive.omega_bar());
    let ob2 = ob * ob;
    let ob3 = ob2 * ob;
    let last = PI / (SQRT_2 * drive.omega3) * 0.5;
    let t110 =
        PI / ob * (o1 * o1 / ob2 + (o2 * (o2 * o2 - 3.0 * o1 * o1).abs() / ob3).powi(2)) + last;
    let t111 = PI / ob * (o2 * o2 / ob2 + (o1 * (o1 * o1 - 3.0 * o2 * o2) / ob3).powi(2)) + last;
    [2.0 * tx, 2.0 * tx, tx, tx, tx, tx, t110, t111]
}

/// `T̄_Ry = T_x + π/(4Ω̄) + π/(8√2Ω₃)`.
pub fn avg_dwell(drive: &DriveParams) -> f64 {
    t_x(drive) + PI / (4.0 * drive.omega_bar()) + PI / (8.0 * SQRT_2 * drive.omega3)
}

pub fn decay_error(drive: &DriveParams, tau_us: f64) -> f64 {
    avg_dwell(drive) / tau_us
}

/// `2(V/64)²/Ω₀²`.
pub fn blockade_error(v: f64, omega0: f64) -> f64 {
    2.0 * (v / 64.0).powi(2) / (omega0 * omega0)
}

pub fn two_photon_error(drive: &DriveParams, v: f64) -> f64 {
    two_photon_error_with(drive, v, TwoPhotonDenominator::Simplified)
}

/// Average two-photon population loss over the eight inputs.
///
/// `|00β⟩` (weight 1/4) couple through `|rrr⟩` with denominator `4V`, the
/// single-control inputs (weight 1/2) through `2V`. The Λ pulses act for
/// `2t = 4π/Ω̄` with coupling `Ω₁Ω₂/(2·den)` and the last pulse for
/// `t' = √2π/Ω₃` with `Ω₃²/(2·den)`.
pub fn two_photon_error_with(
    drive: &DriveParams,
    v: f64,
    denominator: TwoPhotonDenominator,
) -> f64 {
    let t = TAU / drive.omega_bar();
    let t_prime = SQRT_2 * PI / drive.omega3;
    let o12 = drive.omega1 * drive.omega2;
    let o33 = drive.omega3 * drive.omega3;
    let loss =
        |den: f64| (o12 * t / den).sin().powi(2) + (o33 * t_prime / (2.0 * den)).sin().powi(2);
    let double = match denominator {
        TwoPhotonDenominator::Simplified => 4.0 * v,
        TwoPhotonDenominator::Exact => 4.0 * v + v / 32.0,
    };
    0.25 * loss(double) + 0.5 * loss(2.0 * v)
}

/// Budget with an explicit Rydberg lifetime.
pub fn budget_with_lifetime(drive: &DriveParams, v: f64, tau_us: f64) -> ErrorBudget {
    let decay = decay_error(drive, tau_us);
    let blockade = blockade_error(v, drive.omega0);
    let two_photon = two_photon_error(drive, v);
    ErrorBudget {
        gate_time_us: gate_time(drive),
        t_x_us: t_x(drive),
        avg_dwell_us: avg_dwell(drive),
        phi: phase_phi(drive, v),
        decay,
        blockade,
        two_photon,
        total: decay + blockade + two_photon,
    }
}

/// `1 − F = E_decay + E_bl + E_2ph` with `τ` set by the temperature.
pub fn total_error(
    drive: &DriveParams,
    params: &PhysicalParams,
    temperature: Temperature,
) -> ErrorBudget {
    budget_with_lifetime(drive, params.blockade_shift(), temperature.lifetime_us())
}

/// Sweep over `Ω̄/2π` with the other drive parameters tied to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub start_mhz: f64,
    pub stop_mhz: f64,
    pub step_mhz: f64,
    pub omega0_mhz: f64,
    /// `Ω₂/Ω₁`.
    pub ratio: f64,
    /// `Ω₃/Ω̄`.
    pub omega3_over_omega_bar: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            start_mhz: DEFAULT_GRID_STEP_MHZ,
            stop_mhz: MAX_OMEGA_BAR_MHZ,
            step_mhz: DEFAULT_GRID_STEP_MHZ,
            omega0_mhz: 10.0,
            ratio: 2.0,
            omega3_over_omega_bar: 1.0 / SQRT_2,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.start_mhz > 0.0) || !(self.step_mhz > 0.0) || self.stop_mhz < self.start_mhz {
            return Err(Error::Domain(format!(
                "sweep needs 0 < start <= stop and step > 0, got start {} stop {} step {}",
                self.start_mhz, self.stop_mhz, self.step_mhz
            )));
        }
        if self.stop_mhz > MAX_OMEGA_BAR_MHZ + 1e-9 {
            return Err(Error::Domain(format!(
                "omega_bar/2pi must stay below {MAX_OMEGA_BAR_MHZ} MHz, got {}",
                self.stop_mhz
            )));
        }
        if !(self.omega0_mhz > 0.0 && self.ratio > 0.0 && self.omega3_over_omega_bar > 0.0) {
            return Err(Error::Domain(
                "sweep drive constraints must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Grid points `start + k·step` up to `stop`, rounded to 1e-12 MHz.
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.stop_mhz - self.start_mhz) / self.step_mhz + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|k| ((self.start_mhz + k as f64 * self.step_mhz) * 1e12).round() / 1e12)
            .collect()
    }

    pub fn drive_at(&self, omega_bar_mhz: f64) -> Result<DriveParams> {
        let omega_bar = mhz(omega_bar_mhz);
        DriveParams::from_ratio(
            mhz(self.omega0_mhz),
            omega_bar,
            self.ratio,
            omega_bar * self.omega3_over_omega_bar,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub omega_bar_mhz: f64,
    pub gate_time_us: f64,
    pub cryogenic: ErrorBudget,
    pub room: ErrorBudget,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepMinimum {
    pub omega_bar_mhz: f64,
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub min_cryogenic: SweepMinimum,
    pub min_room: SweepMinimum,
}

impl SweepResult {
    pub fn minimum(&self, temperature: Temperature) -> SweepMinimum {
        match temperature {
            Temperature::Cryogenic => self.min_cryogenic,
            Temperature::Room => self.min_room,
        }
    }
}

fn argmin(rows: &[SweepRow], total: impl Fn(&SweepRow) -> f64) -> SweepMinimum {
    rows.iter()
        .map(|r| SweepMinimum {
            omega_bar_mhz: r.omega_bar_mhz,
            total: total(r),
        })
        .fold(
            SweepMinimum {
                omega_bar_mhz: f64::NAN,
                total: f64::INFINITY,
            },
            |best, m| {
                if m.total < best.total {
                    m
                } else {
                    best
                }
            },
        )
}

/// Evaluates the budget at both temperatures over the grid. Rows come back
/// in ascending `Ω̄` regardless of how the points were scheduled.
pub fn sweep(spec: &SweepSpec, params: &PhysicalParams) -> Result<SweepResult> {
    spec.validate()?;
    let v = params.blockade_shift();
    let rows = spec
        .grid()
        .into_par_iter()
        .map(|omega_bar_mhz| {
            let drive = spec.drive_at(omega_bar_mhz)?;
            Ok(SweepRow {
                omega_bar_mhz,
                gate_time_us: gate_time(&drive),
                cryogenic: budget_with_lifetime(&drive, v, Temperature::Cryogenic.lifetime_us()),
                room: budget_with_lifetime(&drive, v, Temperature::Room.lifetime_us()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_cryogenic = argmin(&rows, |r| r.cryogenic.total);
    let min_room = argmin(&rows, |r| r.room.total);
    Ok(SweepResult {
        rows,
        min_cryogenic,
        min_room,
    })
}

/// `Ω̄/2π` in MHz of a drive, for reporting.
pub fn omega_bar_mhz(drive: &DriveParams) -> f64 {
    to_mhz(drive.omega_bar())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::vdw_shift;

    fn v() -> f64 {
        vdw_shift(-633.0, 6.0).unwrap()
    }

    #[test]
    fn gate_time_reference_values() {
        // 1/10 + 2/0.54 + 1/(√2·0.54/√2) = 0.1 + 3/0.54 μs
        let tg = gate_time(&DriveParams::reference(0.54).unwrap());
        assert!((tg - (0.1 + 3.0 / 0.54)).abs() < 1e-12);
        assert!((tg - 5.656).abs() / 5.656 < 1e-3);
        let tg = gate_time(&DriveParams::reference(0.92).unwrap());
        assert!((tg - 3.361).abs() / 3.361 < 1e-3);
        let fast = DriveParams::new(mhz(10.0), 1e12, 1e12, 1e12).unwrap();
        assert!((gate_time(&fast) - 0.1).abs() < 1e-9);
    }

    #[test]
    fn dwell_table_rows() {
        let d = DriveParams::reference(0.54).unwrap();
        let table = dwell_table(&d);
        assert_eq!(table[0], 2.0 * table[2]);
        assert_eq!(table[1], 2.0 * table[5]);
        let expected = PI / d.omega_bar() * 29.0 / 125.0 + PI / (2.0 * SQRT_2 * d.omega3);
        assert!((table[6] - expected).abs() < 1e-12);
    }

    #[test]
    fn lambda_rows_sum_identity() {
        // Ω₂²(Ω₂²−3Ω₁²)² + Ω₁²(Ω₁²−3Ω₂²)² = Ω̄⁶, so the two bracketed terms add to 2
        for &(a, b) in &[(1.0, 2.0), (0.3, 0.7), (5.0, 1.0), (1.0, 1.0)] {
            let d = DriveParams::new(1.0, a, b, 1.0).unwrap();
            let table = dwell_table(&d);
            let pulse4 = PI / (SQRT_2 * d.omega3);
            let lambda_sum = table[6] + table[7] - pulse4;
            assert!((lambda_sum - TAU / d.omega_bar()).abs() < 1e-12);
            let (a2, b2) = (a * a, b * b);
            let lhs = b2 * (b2 - 3.0 * a2).powi(2) + a2 * (a2 - 3.0 * b2).powi(2);
            assert!((lhs - (a2 + b2).powi(3)).abs() < 1e-12 * lhs);
        }
    }

    #[test]
    fn avg_dwell_is_table_mean() {
        let d = DriveParams::reference(0.54).unwrap();
        let mean = dwell_table(&d).iter().sum::<f64>() / 8.0;
        assert!((avg_dwell(&d) - mean).abs() < 1e-12);
        // 5.6056 + 0.2315 + 0.1157 μs
        assert!((avg_dwell(&d) - 5.95).abs() < 0.01);
        let twice = d.scaled(2.0).unwrap();
        assert!((avg_dwell(&twice) - avg_dwell(&d) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn decay_error_reference_values() {
        let e = decay_error(&DriveParams::reference(0.54).unwrap(), 1590.0);
        assert!((e - 3.7e-3).abs() < 0.05e-3);
        let e = decay_error(&DriveParams::reference(0.92).unwrap(), 313.0);
        assert!((e - 1.14e-2).abs() < 0.02e-2);
        assert!(decay_error(&DriveParams::reference(0.54).unwrap(), f64::INFINITY) == 0.0);
    }

    #[test]
    fn blockade_error_reference_values() {
        let e = blockade_error(v(), mhz(10.0));
        assert!((e - 8.99e-4).abs() < 0.01e-4);
        assert!(blockade_error(v(), 1e12) < 1e-20);
        let quarter = blockade_error(v() / 64.0, mhz(10.0)) / e;
        assert!((quarter - 1.0 / 4096.0).abs() < 1e-15);
    }

    #[test]
    fn two_photon_error_reference_values() {
        let e = two_photon_error(&DriveParams::reference(0.54).unwrap(), v());
        assert!((e - 2.0e-3).abs() < 0.05e-3, "{e}");
        let e = two_photon_error(&DriveParams::reference(0.92).unwrap(), v());
        assert!((e - 5.7e-3).abs() < 0.05e-3, "{e}");
        assert!(two_photon_error(&DriveParams::reference(0.54).unwrap(), 1e15) < 1e-20);
        let exact = two_photon_error_with(
            &DriveParams::reference(0.54).unwrap(),
            v(),
            TwoPhotonDenominator::Exact,
        );
        assert!(exact < two_photon_error(&DriveParams::reference(0.54).unwrap(), v()));
    }

    #[test]
    fn total_is_sum_of_parts() {
        let p = PhysicalParams::cs84p(3);
        for ob in [0.2, 0.54, 0.92, 2.0] {
            for t in [Temperature::Cryogenic, Temperature::Room] {
                let b = total_error(&DriveParams::reference(ob).unwrap(), &p, t);
                assert!(b.decay >= 0.0 && b.blockade >= 0.0 && b.two_photon >= 0.0);
                assert_eq!(b.total, b.decay + b.blockade + b.two_photon);
            }
        }
        let b = total_error(
            &DriveParams::reference(0.54).unwrap(),
            &p,
            Temperature::Cryogenic,
        );
        assert!((b.total - 6.7e-3).abs() / 6.7e-3 < 0.1);
        let b = total_error(
            &DriveParams::reference(0.92).unwrap(),
            &p,
            Temperature::Room,
        );
        assert!((b.total - 18e-3).abs() / 18e-3 < 0.1);
    }

    #[test]
    fn sweep_grid_and_monotone_components() {
        let spec = SweepSpec::default();
        let grid = spec.grid();
        assert_eq!(grid.len(), 115);
        assert_eq!(grid[26], 0.54);
        assert_eq!(*grid.last().unwrap(), 2.3);
        let r = sweep(&spec, &PhysicalParams::cs84p(3)).unwrap();
        assert!(r
            .rows
            .windows(2)
            .all(|w| w[1].gate_time_us < w[0].gate_time_us));
        assert!(r
            .rows
            .windows(2)
            .all(|w| w[1].cryogenic.decay < w[0].cryogenic.decay));
        assert!(r
            .rows
            .windows(2)
            .all(|w| w[1].cryogenic.two_photon > w[0].cryogenic.two_photon));
        assert!((r.min_cryogenic.omega_bar_mhz - 0.54).abs() <= 0.02 + 1e-9);
        assert!((r.min_room.omega_bar_mhz - 0.92).abs() <= 0.02 + 1e-9);
    }

    #[test]
    fn sweep_range_validation() {
        let p = PhysicalParams::cs84p(3);
        assert!(sweep(
            &SweepSpec {
                stop_mhz: 3.0,
                ..Default::default()
            },
            &p
        )
        .is_err());
        assert!(sweep(
            &SweepSpec {
                start_mhz: 0.0,
                ..Default::default()
            },
            &p
        )
        .is_err());
        assert!(sweep(
            &SweepSpec {
                step_mhz: -0.1,
                ..Default::default()
            },
            &p
        )
        .is_err());
    }

    #[test]
    fn temperature_parsing() {
        assert_eq!(
            "4.2K".parse::<Temperature>().unwrap(),
            Temperature::Cryogenic
        );
        assert_eq!("300k".parse::<Temperature>().unwrap(), Temperature::Room);
        assert!("77K".parse::<Temperature>().is_err());
    }
}
