//! Configuration ingestion and the `synth | simulate | sweep | budget | phase`
//! commands.
//!
//! Frequencies in the configuration are `Ω/2π` values in MHz; they are
//! converted to rad/μs (`Ω = 2π·value`) before reaching the library. Every
//! command embeds the fully resolved configuration in its output.

use std::f64::consts::{PI, SQRT_2};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::budget::{
    self, SweepResult, SweepSpec, Temperature, DEFAULT_GRID_STEP_MHZ, MAX_OMEGA_BAR_MHZ,
};
use crate::error::{Error, Result};
use crate::evolve::{evolve, residue_blockade_loss, Decay, SimulationOptions};
use crate::ideal::FidelityMode;
use crate::model::{CcInteraction, GateSchedule, PhysicalParams};
use crate::qcore::ket_label;
use crate::schedule::{self, phase_phi, ratio_from_theta, solve_phase_matching, DriveParams};
use crate::units::{mhz, to_mhz};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gate {
    Deutsch,
    Toffoli,
    Cnot,
}

impl Gate {
    pub fn name(self) -> &'static str {
        match self {
            Gate::Deutsch => "deutsch",
            Gate::Toffoli => "toffoli",
            Gate::Cnot => "cnot",
        }
    }

    pub fn n_atoms(self) -> usize {
        if self == Gate::Cnot {
            2
        } else {
            3
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecaySetting {
    None,
    Effective,
}

/// Run configuration as read from JSON. Unset fields take the defaults of
/// the reference working point.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gate: Option<Gate>,
    /// Deutsch angle in radians; alternative to `ratio_omega2_over_omega1`.
    pub theta: Option<f64>,
    pub ratio_omega2_over_omega1: Option<f64>,
    pub omega0_mhz: Option<f64>,
    pub omega_bar_mhz: Option<f64>,
    /// Defaults to `Ω̄/√2`.
    pub omega3_mhz: Option<f64>,
    pub c6_ghz_um6: Option<f64>,
    pub l_um: Option<f64>,
    /// Overrides the lifetime implied by `temperature`.
    pub tau_us: Option<f64>,
    pub temperature: Option<Temperature>,
    pub decay: Option<DecaySetting>,
    pub cc_interaction: Option<CcInteraction>,
    pub frame_correction: Option<bool>,
    pub v_scale: Option<f64>,
    pub dwell_step_us: Option<f64>,
    pub sweep_start_mhz: Option<f64>,
    pub sweep_stop_mhz: Option<f64>,
    pub grid_step_mhz: Option<f64>,
    /// Largest phase-matching index reported by `phase`.
    pub phase_max_n: Option<u32>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("cannot parse config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Applies defaults and checks consistency.
    pub fn resolve(&self) -> Result<ResolvedConfig> {
        let gate = self.gate.unwrap_or(Gate::Deutsch);
        let (theta, ratio) = match (self.theta, self.ratio_omega2_over_omega1) {
            (Some(_), Some(_)) if gate == Gate::Deutsch => {
                return Err(Error::Config(
                    "give either theta or ratio_omega2_over_omega1, not both".into(),
                ))
            }
            (Some(theta), _) => (
                theta,
                ratio_from_theta(theta).map_err(|e| Error::Config(e.to_string()))?,
            ),
            (None, ratio) => {
                let ratio = ratio.unwrap_or(2.0);
                let theta =
                    schedule::theta_from_ratio(ratio).map_err(|e| Error::Config(e.to_string()))?;
                (theta, ratio)
            }
        };
        let omega_bar_mhz = self.omega_bar_mhz.unwrap_or(0.54);
        let temperature = self.temperature.unwrap_or(Temperature::Cryogenic);
        let resolved = ResolvedConfig {
            gate,
            theta,
            ratio_omega2_over_omega1: ratio,
            omega0_mhz: self.omega0_mhz.unwrap_or(10.0),
            omega_bar_mhz,
            omega3_mhz: self.omega3_mhz.unwrap_or(omega_bar_mhz / SQRT_2),
            c6_ghz_um6: self.c6_ghz_um6.unwrap_or(-633.0),
            l_um: self.l_um.unwrap_or(6.0),
            tau_us: self.tau_us.unwrap_or(temperature.lifetime_us()),
            temperature,
            decay: self.decay.unwrap_or(DecaySetting::None),
            cc_interaction: self.cc_interaction.unwrap_or_default(),
            frame_correction: self.frame_correction.unwrap_or(true),
            v_scale: self.v_scale.unwrap_or(1.0),
            dwell_step_us: self.dwell_step_us.unwrap_or(1e-3),
            sweep_start_mhz: self.sweep_start_mhz.unwrap_or(DEFAULT_GRID_STEP_MHZ),
            sweep_stop_mhz: self.sweep_stop_mhz.unwrap_or(MAX_OMEGA_BAR_MHZ),
            grid_step_mhz: self.grid_step_mhz.unwrap_or(DEFAULT_GRID_STEP_MHZ),
            phase_max_n: self.phase_max_n.unwrap_or(4),
        };
        resolved.validate()?;
        Ok(resolved)
    }
}

/// Configuration with every default applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub gate: Gate,
    pub theta: f64,
    pub ratio_omega2_over_omega1: f64,
    pub omega0_mhz: f64,
    pub omega_bar_mhz: f64,
    pub omega3_mhz: f64,
    pub c6_ghz_um6: f64,
    pub l_um: f64,
    pub tau_us: f64,
    pub temperature: Temperature,
    pub decay: DecaySetting,
    pub cc_interaction: CcInteraction,
    pub frame_correction: bool,
    pub v_scale: f64,
    pub dwell_step_us: f64,
    pub sweep_start_mhz: f64,
    pub sweep_stop_mhz: f64,
    pub grid_step_mhz: f64,
    pub phase_max_n: u32,
}

impl ResolvedConfig {
    fn validate(&self) -> Result<()> {
        let positive = [
            ("omega0_mhz", self.omega0_mhz),
            ("omega_bar_mhz", self.omega_bar_mhz),
            ("omega3_mhz", self.omega3_mhz),
            ("l_um", self.l_um),
            ("tau_us", self.tau_us),
            ("v_scale", self.v_scale),
            ("dwell_step_us", self.dwell_step_us),
            ("grid_step_mhz", self.grid_step_mhz),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.phase_max_n == 0 {
            return Err(Error::Config("phase_max_n must be >= 1".into()));
        }
        Ok(())
    }

    pub fn drive(&self) -> Result<DriveParams> {
        DriveParams::from_ratio(
            mhz(self.omega0_mhz),
            mhz(self.omega_bar_mhz),
            self.ratio_omega2_over_omega1,
            mhz(self.omega3_mhz),
        )
    }

    pub fn params(&self) -> Result<PhysicalParams> {
        PhysicalParams::new(self.c6_ghz_um6, self.l_um, self.tau_us, self.gate.n_atoms())
    }

    pub fn schedule(&self) -> Result<GateSchedule> {
        schedule::schedule_for(self.gate.name(), &self.drive()?)
    }

    pub fn options(&self) -> SimulationOptions {
        SimulationOptions {
            decay: match self.decay {
                DecaySetting::None => Decay::None,
                DecaySetting::Effective => Decay::Effective {
                    tau_us: self.tau_us,
                },
            },
            cc_interaction: self.cc_interaction,
            frame_correction: self.frame_correction,
            v_scale: self.v_scale,
            dwell_sampling_step: self.dwell_step_us,
            track_dwell: true,
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            start_mhz: self.sweep_start_mhz,
            stop_mhz: self.sweep_stop_mhz,
            step_mhz: self.grid_step_mhz,
            omega0_mhz: self.omega0_mhz,
            ratio: self.ratio_omega2_over_omega1,
            omega3_over_omega_bar: self.omega3_mhz / self.omega_bar_mhz,
        }
    }
}

/// Flag overrides applied on top of the JSON file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub v_scale: Option<f64>,
    pub grid_step_mhz: Option<f64>,
    pub temperature: Option<Temperature>,
}

impl Overrides {
    pub fn apply(&self, config: &mut RunConfig) {
        if let Some(v) = self.v_scale {
            config.v_scale = Some(v);
        }
        if let Some(step) = self.grid_step_mhz {
            config.grid_step_mhz = Some(step);
        }
        if let Some(t) = self.temperature {
            config.temperature = Some(t);
            // an explicit temperature flag wins over a lifetime in the file
            config.tau_us = None;
        }
    }
}

fn complex_json(z: num_complex::Complex64) -> Value {
    json!({
        "re": z.re,
        "im": z.im,
        "magnitude_mhz": to_mhz(z.norm()),
        "phase_rad": z.arg(),
    })
}

/// Schedule listing with derived drive quantities.
pub fn cmd_synth(config: &ResolvedConfig) -> Result<Value> {
    let drive = config.drive()?;
    let sched = config.schedule()?;
    let v = PhysicalParams::new(config.c6_ghz_um6, config.l_um, config.tau_us, 3)?.blockade_shift();
    let segments: Vec<Value> = sched
        .segments
        .iter()
        .enumerate()
        .map(|(k, seg)| {
            json!({
                "index": k + 1,
                "label": seg.label,
                "duration_us": seg.duration,
                "transitions": seg.transitions.iter().map(|t| json!({
                    "atom": t.atom,
                    "lower": t.lower.to_string(),
                    "upper": t.upper().to_string(),
                    "rabi": complex_json(t.rabi),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let matching: Vec<Value> = (1..=config.phase_max_n)
        .map(|n| {
            solve_phase_matching(n, v).map(|ob| json!({ "n": n, "omega_bar_mhz": to_mhz(ob) }))
        })
        .collect::<Result<_>>()?;
    Ok(json!({
        "command": "synth",
        "config": config,
        "gate": config.gate.name(),
        "n_atoms": sched.n_atoms,
        "theta": drive.theta(),
        "sin_theta": drive.theta().sin(),
        "cos_theta": drive.theta().cos(),
        "omega1_mhz": to_mhz(drive.omega1),
        "omega2_mhz": to_mhz(drive.omega2),
        "ratio_omega2_over_omega1": drive.ratio(),
        "total_duration_us": sched.total_duration(),
        "phi_rad": phase_phi(&drive, v),
        "phase_matching": matching,
        "segments": segments,
    }))
}

/// Human-readable rendering of [`cmd_synth`] output.
pub fn render_synth(report: &Value) -> String {
    let mut out = format!(
        "{} gate, {} atoms, theta = {:.9} rad (sin {:.6}, cos {:.6})\nOmega1/2pi = {:.6} MHz, Omega2/2pi = {:.6} MHz, phi = {:.6} rad\n",
        report["gate"].as_str().unwrap_or("?"),
        report["n_atoms"],
        report["theta"].as_f64().unwrap_or(f64::NAN),
        report["sin_theta"].as_f64().unwrap_or(f64::NAN),
        report["cos_theta"].as_f64().unwrap_or(f64::NAN),
        report["omega1_mhz"].as_f64().unwrap_or(f64::NAN),
        report["omega2_mhz"].as_f64().unwrap_or(f64::NAN),
        report["phi_rad"].as_f64().unwrap_or(f64::NAN),
    );
    for seg in report["segments"].as_array().into_iter().flatten() {
        out.push_str(&format!(
            "  [{}] {:<26} {:>10.6} us\n",
            seg["index"],
            seg["label"].as_str().unwrap_or(""),
            seg["duration_us"].as_f64().unwrap_or(f64::NAN)
        ));
        for t in seg["transitions"].as_array().into_iter().flatten() {
            out.push_str(&format!(
                "        atom {} {}<->{}  |Omega|/2pi = {:.6} MHz  phase = {:+.6} rad\n",
                t["atom"],
                t["lower"].as_str().unwrap_or(""),
                t["upper"].as_str().unwrap_or(""),
                t["rabi"]["magnitude_mhz"].as_f64().unwrap_or(f64::NAN),
                t["rabi"]["phase_rad"].as_f64().unwrap_or(f64::NAN),
            ));
        }
    }
    out
}

/// Propagates the configured gate and reports fidelities and diagnostics.
pub fn cmd_simulate(config: &ResolvedConfig) -> Result<Value> {
    let params = config.params()?;
    let sched = config.schedule()?;
    let opts = config.options();
    let result = evolve(&sched, &params, &opts)?;
    let trace = result.fidelity(FidelityMode::Trace)?;
    let state_average = result.fidelity(FidelityMode::StateAverage)?;
    let per_input = |values: &[f64]| -> Value {
        result
            .inputs
            .iter()
            .zip(values)
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect::<serde_json::Map<_, _>>()
            .into()
    };
    let dwell = result
        .dwell
        .as_deref()
        .map(per_input)
        .unwrap_or(Value::Null);
    let residue = if params.n_atoms == 3 {
        Some(residue_blockade_loss(&sched, &params, &opts)?)
    } else {
        None
    };
    let mut report = json!({
        "command": "simulate",
        "config": config,
        "gate": config.gate.name(),
        "total_duration_us": sched.total_duration(),
        "fidelity": { "trace": trace, "state_average": state_average },
        "infidelity": { "trace": 1.0 - trace, "state_average": 1.0 - state_average },
        "unitarity_defect": result.unitarity_defect(),
        "leakage": per_input(&result.leakage),
        "norm_loss": per_input(&result.norm_loss),
        "mean_norm_loss": result.mean_norm_loss(),
        "dwell_us": dwell,
        "phi_rad": result.phase_phi,
        "frame_corrected": result.frame_corrected,
        "phase_mismatch": result.phase_mismatch.iter().map(|(k, v)| (k.clone(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "residue_blockade_loss": residue,
    });
    if config.gate != Gate::Cnot {
        let drive = config.drive()?;
        report["analytic"] = json!(budget::budget_with_lifetime(
            &drive,
            params.blockade_shift(),
            config.tau_us
        ));
        report["analytic_dwell_us"] = json!(budget::dwell_table(&drive));
    }
    report["block"] = json!((0..result.computational_block.rows())
        .map(|r| (0..result.computational_block.cols())
            .map(|c| {
                let z = result.computational_block.get(r, c);
                [z.re, z.im]
            })
            .collect::<Vec<_>>())
        .collect::<Vec<_>>());
    report["basis"] = json!(crate::qcore::computational_indices(params.n_atoms)
        .into_iter()
        .map(|i| ket_label(
            &crate::qcore::levels_from_index(i, params.n_atoms).expect("valid index")
        ))
        .collect::<Vec<_>>());
    Ok(report)
}

/// Budget at the configured working point for both temperatures.
pub fn cmd_budget(config: &ResolvedConfig) -> Result<Value> {
    let drive = config.drive()?;
    let params = PhysicalParams::new(config.c6_ghz_um6, config.l_um, config.tau_us, 3)?;
    let v = params.blockade_shift();
    Ok(json!({
        "command": "budget",
        "config": config,
        "blockade_shift_mhz": to_mhz(v),
        "selected": budget::budget_with_lifetime(&drive, v, config.tau_us),
        "4.2K": budget::total_error(&drive, &params, Temperature::Cryogenic),
        "300K": budget::total_error(&drive, &params, Temperature::Room),
        "dwell_table_us": budget::dwell_table(&drive),
    }))
}

/// Phase accumulation and the Ω̄ values that make it a multiple of 2π.
pub fn cmd_phase(config: &ResolvedConfig) -> Result<Value> {
    let drive = config.drive()?;
    let v = PhysicalParams::new(config.c6_ghz_um6, config.l_um, config.tau_us, 3)?.blockade_shift();
    let phi = phase_phi(&drive, v);
    let solutions: Vec<Value> = (1..=config.phase_max_n)
        .map(|n| -> Result<Value> {
            let ob = solve_phase_matching(n, v)?;
            let matched = DriveParams::from_ratio(
                drive.omega0,
                ob,
                drive.ratio(),
                ob * drive.omega3 / drive.omega_bar(),
            )?;
            let tau = config.tau_us;
            Ok(json!({
                "n": n,
                "omega_bar_mhz": to_mhz(ob),
                "phi_rad": phase_phi(&matched, v),
                "phi_over_pi": phase_phi(&matched, v) / PI,
                "total_error": budget::budget_with_lifetime(&matched, v, tau).total,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(json!({
        "command": "phase",
        "config": config,
        "blockade_shift_mhz": to_mhz(v),
        "omega_bar_mhz": config.omega_bar_mhz,
        "phi_rad": phi,
        "phi_over_pi": phi / PI,
        "solutions": solutions,
    }))
}

pub const SWEEP_HEADER: [&str; 9] = [
    "omega_bar_MHz",
    "T_g_us",
    "E_decay_4K",
    "E_bl",
    "E_2ph",
    "total_4K",
    "E_decay_300K",
    "total_300K",
    "phi_rad",
];

/// Decimal rendering with at least nine significant digits.
pub fn format_decimal(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(1) as usize;
    format!("{x:.decimals$}")
}

pub fn run_sweep(config: &ResolvedConfig) -> Result<SweepResult> {
    let params = PhysicalParams::new(config.c6_ghz_um6, config.l_um, config.tau_us, 3)?;
    budget::sweep(&config.sweep_spec(), &params)
}

/// CSV text of a sweep, header first, ascending in `Ω̄`.
pub fn sweep_csv(result: &SweepResult) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(SWEEP_HEADER)?;
    for row in &result.rows {
        let fields = [
            row.omega_bar_mhz,
            row.gate_time_us,
            row.cryogenic.decay,
            row.cryogenic.blockade,
            row.cryogenic.two_photon,
            row.cryogenic.total,
            row.room.decay,
            row.room.total,
            row.cryogenic.phi,
        ];
        writer.write_record(fields.iter().map(|&x| format_decimal(x)))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
}

/// Sweep CSV plus a JSON summary carrying the minima and resolved config.
pub fn cmd_sweep(config: &ResolvedConfig) -> Result<(String, Value)> {
    let result = run_sweep(config)?;
    let summary = json!({
        "command": "sweep",
        "config": config,
        "points": result.rows.len(),
        "minimum_4.2K": result.min_cryogenic,
        "minimum_300K": result.min_room,
    });
    Ok((sweep_csv(&result)?, summary))
}
