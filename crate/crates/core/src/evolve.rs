//! Segment-exact propagation of gate schedules.
//!
//! Each piecewise-constant segment is applied as `exp(−iH·duration)`, so no
//! integrator error enters the propagator. Rydberg dwell times re-sample each
//! segment on a fine grid and integrate the excited-atom count with the
//! trapezoidal rule.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::{gate_fidelity, ideal_for, FidelityMode};
use crate::model::{
    drive_operator, interaction_operator_with, pair_shifts, CcInteraction, GateSchedule,
    InteractionModel, PhysicalParams,
};
use crate::qcore::{
    computational_indices, computational_labels, levels_from_index, matrix_exponential,
    ComplexMatrix, Level, C64, HERMITIAN_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Decay {
    None,
    /// Non-Hermitian loss `−(i/2τ)` per atom in `r`.
    Effective {
        tau_us: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationOptions {
    pub decay: Decay,
    pub cc_interaction: CcInteraction,
    /// Multiply the columns of `|00β⟩` inputs by `e^{−iφ}`.
    pub frame_correction: bool,
    /// Multiplier on the control–target blockade shift.
    pub v_scale: f64,
    /// Upper bound on the dwell-time sampling step in μs. Every segment is
    /// sampled at least 50 times regardless.
    pub dwell_sampling_step: f64,
    pub track_dwell: bool,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            decay: Decay::None,
            cc_interaction: CcInteraction::Physical,
            frame_correction: true,
            v_scale: 1.0,
            dwell_sampling_step: 1e-3,
            track_dwell: true,
        }
    }
}

impl SimulationOptions {
    pub fn interaction_model(&self) -> InteractionModel {
        InteractionModel {
            cc: self.cc_interaction,
            v_scale: self.v_scale,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.dwell_sampling_step > 0.0) {
            return Err(Error::Domain("dwell_sampling_step must be positive".into()));
        }
        if !(self.v_scale > 0.0 && self.v_scale.is_finite()) {
            return Err(Error::Domain(format!(
                "v_scale must be positive, got {}",
                self.v_scale
            )));
        }
        if let Decay::Effective { tau_us } = self.decay {
            if !(tau_us > 0.0) {
                return Err(Error::Domain(format!(
                    "decay lifetime must be positive, got {tau_us}"
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of propagating one schedule.
#[derive(Clone, Debug)]
pub struct SimulationResult {
    pub schedule: GateSchedule,
    pub full_propagator: ComplexMatrix,
    /// Computational block in qubit order, frame-corrected if requested, not renormalized.
    pub computational_block: ComplexMatrix,
    /// Qubit labels of the computational inputs (`"000"`, ...).
    pub inputs: Vec<String>,
    pub leakage: Vec<f64>,
    pub norm_loss: Vec<f64>,
    /// Integrated Rydberg occupation per input in μs (decay off).
    pub dwell: Option<Vec<f64>>,
    /// Frame phase φ from the control–control shift; zero when that shift is off.
    pub phase_phi: f64,
    pub frame_corrected: bool,
    /// Residual phase of the frame-corrected `|00β⟩` diagonal entries.
    pub phase_mismatch: Vec<(String, f64)>,
}

impl SimulationResult {
    fn input_position(&self, label: &str) -> Result<usize> {
        self.inputs
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Construction(format!("{label:?} is not a computational ket")))
    }

    pub fn leakage_of(&self, label: &str) -> Result<f64> {
        Ok(self.leakage[self.input_position(label)?])
    }

    pub fn norm_loss_of(&self, label: &str) -> Result<f64> {
        Ok(self.norm_loss[self.input_position(label)?])
    }

    pub fn dwell_of(&self, label: &str) -> Result<Option<f64>> {
        let k = self.input_position(label)?;
        Ok(self.dwell.as_ref().map(|d| d[k]))
    }

    /// `|⟨to|U|from⟩|²` within the computational block.
    pub fn transition_probability(&self, from: &str, to: &str) -> Result<f64> {
        let (c, r) = (self.input_position(from)?, self.input_position(to)?);
        Ok(self.computational_block.get(r, c).norm_sqr())
    }

    pub fn mean_norm_loss(&self) -> f64 {
        self.norm_loss.iter().sum::<f64>() / self.norm_loss.len() as f64
    }

    /// Fidelity of the computational block against the schedule's target gate.
    pub fn fidelity(&self, mode: FidelityMode) -> Result<f64> {
        gate_fidelity(
            &self.computational_block,
            &ideal_for(&self.schedule.kind)?.matrix,
            mode,
        )
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.full_propagator.unitarity_defect()
    }
}

/// Number of atoms in `r` for every basis state.
fn rydberg_counts(n_atoms: usize) -> Result<Vec<f64>> {
    (0..3usize.pow(n_atoms as u32))
        .map(|i| {
            Ok(levels_from_index(i, n_atoms)?
                .iter()
                .filter(|l| **l == Level::R)
                .count() as f64)
        })
        .collect()
}

/// Inputs with both controls in `g0`, i.e. those that end up in `|rrβ⟩`.
fn doubly_excited_inputs(n_atoms: usize) -> Vec<usize> {
    if n_atoms != 3 {
        return vec![];
    }
    vec![0, 1]
}

/// Frame phase `φ = −V_cc·T`, with `T` the time the controls spend in `r` together.
pub fn frame_phase(
    schedule: &GateSchedule,
    params: &PhysicalParams,
    cc: CcInteraction,
) -> Result<f64> {
    if params.n_atoms != 3 {
        return Ok(0.0);
    }
    let model = InteractionModel { cc, v_scale: 1.0 };
    let cc_shift = pair_shifts(params, &model)?
        .into_iter()
        .find(|(a, b, _)| (*a, *b) == (0, 1))
        .map(|(_, _, v)| v)
        .unwrap_or(0.0);
    Ok(-cc_shift * schedule.inner_duration())
}

fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Segment Hamiltonians including the chosen interaction model and decay.
fn segment_hamiltonians(
    schedule: &GateSchedule,
    params: &PhysicalParams,
    opts: &SimulationOptions,
    with_decay: bool,
) -> Result<Vec<ComplexMatrix>> {
    let interaction = interaction_operator_with(params, &opts.interaction_model())?;
    let counts = rydberg_counts(params.n_atoms)?;
    let loss = match (with_decay, opts.decay) {
        (true, Decay::Effective { tau_us }) => {
            let diag: Vec<C64> = counts
                .iter()
                .map(|n| C64::new(0.0, -n / (2.0 * tau_us)))
                .collect();
            Some(ComplexMatrix::from_diagonal(&diag))
        }
        _ => None,
    };
    schedule
        .segments
        .iter()
        .map(|seg| {
            let mut h = drive_operator(seg, params.n_atoms)?.add(&interaction)?;
            debug_assert!(h.is_hermitian(HERMITIAN_TOL));
            if let Some(loss) = &loss {
                h = h.add(loss)?;
            }
            Ok(h)
        })
        .collect()
}

fn check_register(schedule: &GateSchedule, params: &PhysicalParams) -> Result<()> {
    if schedule.n_atoms != params.n_atoms {
        return Err(Error::DimensionMismatch {
            expected: format!("{}-atom register", params.n_atoms),
            found: format!("{}-atom schedule", schedule.n_atoms),
        });
    }
    Ok(())
}

/// Propagates `schedule` and collects the gate diagnostics.
pub fn evolve(
    schedule: &GateSchedule,
    params: &PhysicalParams,
    opts: &SimulationOptions,
) -> Result<SimulationResult> {
    check_register(schedule, params)?;
    opts.validate()?;
    let n = params.n_atoms;
    let dim = params.dim();
    let hamiltonians = segment_hamiltonians(schedule, params, opts, true)?;
    let mut u = ComplexMatrix::identity(dim);
    for (h, seg) in hamiltonians.iter().zip(&schedule.segments) {
        u = matrix_exponential(h, seg.duration)?.dot(&u)?;
    }
    if !u.is_finite() {
        return Err(Error::Numerical("propagator has non-finite entries".into()));
    }

    let comp = computational_indices(n);
    let inputs = computational_labels(n);
    let mut block = u.submatrix(&comp, &comp);
    let phase_phi = frame_phase(schedule, params, opts.cc_interaction)?;
    if opts.frame_correction {
        for k in doubly_excited_inputs(n) {
            block.scale_column(k, C64::from_polar(1.0, -phase_phi));
        }
    }

    let mut leakage = Vec::with_capacity(comp.len());
    let mut norm_loss = Vec::with_capacity(comp.len());
    for (k, &col) in comp.iter().enumerate() {
        let out = u.column(col);
        let kept: f64 = (0..comp.len()).map(|j| block.get(j, k).norm_sqr()).sum();
        leakage.push((1.0 - kept).clamp(0.0, 1.0));
        norm_loss.push((1.0 - out.norm_sqr()).max(0.0));
    }
    let phase_mismatch = doubly_excited_inputs(n)
        .into_iter()
        .map(|k| (inputs[k].clone(), wrap_phase(block.get(k, k).arg())))
        .collect();
    let dwell = if opts.track_dwell {
        Some(dwell_times(schedule, params, opts)?)
    } else {
        None
    };

    Ok(SimulationResult {
        schedule: schedule.clone(),
        full_propagator: u,
        computational_block: block,
        inputs,
        leakage,
        norm_loss,
        dwell,
        phase_phi,
        frame_corrected: opts.frame_correction,
        phase_mismatch,
    })
}

/// Block of the propagator restricted to the computational kets, in qubit order.
pub fn computational_block(result: &SimulationResult) -> ComplexMatrix {
    result.computational_block.clone()
}

/// Integrated Rydberg occupation `∫ Σ_atoms P(atom in r) dt` for every
/// computational input, decay off.
pub fn dwell_times(
    schedule: &GateSchedule,
    params: &PhysicalParams,
    opts: &SimulationOptions,
) -> Result<Vec<f64>> {
    check_register(schedule, params)?;
    opts.validate()?;
    let counts = rydberg_counts(params.n_atoms)?;
    let comp = computational_indices(params.n_atoms);
    let dim = params.dim();
    let mut psi = DMatrix::<C64>::zeros(dim, comp.len());
    for (k, &i) in comp.iter().enumerate() {
        psi[(i, k)] = C64::new(1.0, 0.0);
    }
    let occupation = |psi: &DMatrix<C64>| -> Vec<f64> {
        (0..psi.ncols())
            .map(|k| {
                psi.column(k)
                    .iter()
                    .zip(&counts)
                    .map(|(a, n)| n * a.norm_sqr())
                    .sum()
            })
            .collect()
    };
    let mut total = vec![0.0; comp.len()];
    let hamiltonians = segment_hamiltonians(schedule, params, opts, false)?;
    for (h, seg) in hamiltonians.iter().zip(&schedule.segments) {
        let steps = ((seg.duration / opts.dwell_sampling_step).ceil() as usize).max(50);
        let dt = seg.duration / steps as f64;
        let step = matrix_exponential(h, dt)?.into_inner();
        let mut prev = occupation(&psi);
        for _ in 0..steps {
            psi = &step * &psi;
            let next = occupation(&psi);
            for ((acc, a), b) in total.iter_mut().zip(&prev).zip(&next) {
                *acc += 0.5 * dt * (a + b);
            }
            prev = next;
        }
    }
    Ok(total)
}

/// Dwell time for one computational input label such as `"010"`.
pub fn rydberg_dwell(
    schedule: &GateSchedule,
    params: &PhysicalParams,
    opts: &SimulationOptions,
    input: &str,
) -> Result<f64> {
    let labels = computational_labels(params.n_atoms);
    let k = labels
        .iter()
        .position(|l| l == input)
        .ok_or_else(|| Error::Construction(format!("{input:?} is not a computational ket")))?;
    Ok(dwell_times(schedule, params, opts)?[k])
}

/// Leakage of the `|00β⟩` inputs attributable to the control–control
/// residue: mean over β of the leakage with the physical `V/64` minus the
/// leakage with that shift switched off.
pub fn residue_blockade_loss(
    schedule: &GateSchedule,
    params: &PhysicalParams,
    opts: &SimulationOptions,
) -> Result<f64> {
    if params.n_atoms != 3 {
        return Err(Error::Construction(
            "residue blockade needs a three-atom register".into(),
        ));
    }
    let base = SimulationOptions {
        decay: Decay::None,
        track_dwell: false,
        ..opts.clone()
    };
    let with = evolve(
        schedule,
        params,
        &SimulationOptions {
            cc_interaction: CcInteraction::Physical,
            ..base.clone()
        },
    )?;
    let without = evolve(
        schedule,
        params,
        &SimulationOptions {
            cc_interaction: CcInteraction::None,
            ..base
        },
    )?;
    let inputs = doubly_excited_inputs(3);
    Ok(inputs
        .iter()
        .map(|&k| with.leakage[k] - without.leakage[k])
        .sum::<f64>()
        / inputs.len() as f64)
}
