//! Physical parameters, van der Waals interaction and per-segment Hamiltonians.
//!
//! Atoms sit on a line with nearest-neighbour spacing `L`. In a three-atom
//! register the target is in the middle, so each control is `L` from the
//! target and the two controls are `2L` apart. A pair of atoms both in `r`
//! picks up `V(d) = C6/d⁶`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{basis_index, levels_from_index, ComplexMatrix, Level, C64, HERMITIAN_TOL};

/// Geometry and atomic constants of the register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// `C6/2π` in GHz·μm⁶ (signed).
    pub c6_over_2pi: f64,
    /// Nearest-neighbour spacing `L` in μm.
    pub spacing_um: f64,
    /// Rydberg lifetime `τ` in μs.
    pub lifetime_us: f64,
    pub n_atoms: usize,
}

impl PhysicalParams {
    pub fn new(
        c6_over_2pi: f64,
        spacing_um: f64,
        lifetime_us: f64,
        n_atoms: usize,
    ) -> Result<Self> {
        if !(spacing_um > 0.0 && spacing_um.is_finite()) {
            return Err(Error::Domain(format!(
                "spacing must be positive, got {spacing_um}"
            )));
        }
        if !(lifetime_us > 0.0) {
            return Err(Error::Domain(format!(
                "lifetime must be positive, got {lifetime_us}"
            )));
        }
        if !c6_over_2pi.is_finite() {
            return Err(Error::Domain("C6 must be finite".into()));
        }
        if n_atoms != 2 && n_atoms != 3 {
            return Err(Error::Construction(format!(
                "register must hold 2 or 3 atoms, got {n_atoms}"
            )));
        }
        Ok(Self {
            c6_over_2pi,
            spacing_um,
            lifetime_us,
            n_atoms,
        })
    }

    /// Cs 84p₃/₂ at `L = 6 μm`: `C6/2π = −633 GHz·μm⁶`, `τ = 1.59 ms` (4.2 K).
    pub fn cs84p(n_atoms: usize) -> Self {
        Self::new(-633.0, 6.0, 1590.0, n_atoms).expect("reference parameters are valid")
    }

    pub fn with_lifetime(mut self, lifetime_us: f64) -> Self {
        self.lifetime_us = lifetime_us;
        self
    }

    /// Control–target blockade shift `V = C6/L⁶` in rad/μs.
    pub fn blockade_shift(&self) -> f64 {
        vdw_shift(self.c6_over_2pi, self.spacing_um).expect("spacing validated on construction")
    }

    pub fn dim(&self) -> usize {
        3usize.pow(self.n_atoms as u32)
    }
}

/// Treatment of the control–control pair at distance `2L`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CcInteraction {
    /// Residual `V/64`.
    #[default]
    Physical,
    /// Zero control–control shift.
    None,
}

/// How the pair shifts enter the Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionModel {
    pub cc: CcInteraction,
    /// Multiplier on the control–target shifts only; the control–control
    /// residue is governed by `cc` alone.
    pub v_scale: f64,
}

impl Default for InteractionModel {
    fn default() -> Self {
        Self {
            cc: CcInteraction::Physical,
            v_scale: 1.0,
        }
    }
}

/// `C6/d⁶` in rad/μs for `C6/2π` in GHz·μm⁶ and `d` in μm.
pub fn vdw_shift(c6_over_2pi: f64, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Domain(format!(
            "interatomic distance must be positive, got {d}"
        )));
    }
    Ok(TAU * 1000.0 * c6_over_2pi / d.powi(6))
}

/// Interacting pairs `(atom a, atom b, shift)` for the linear register.
pub fn pair_shifts(
    params: &PhysicalParams,
    model: &InteractionModel,
) -> Result<Vec<(usize, usize, f64)>> {
    let v = vdw_shift(params.c6_over_2pi, params.spacing_um)? * model.v_scale;
    match params.n_atoms {
        2 => Ok(vec![(0, 1, v)]),
        3 => {
            let cc = match model.cc {
                CcInteraction::Physical => vdw_shift(params.c6_over_2pi, 2.0 * params.spacing_um)?,
                CcInteraction::None => 0.0,
            };
            Ok(vec![(0, 2, v), (1, 2, v), (0, 1, cc)])
        }
        n => Err(Error::Construction(format!(
            "unsupported register size {n}"
        ))),
    }
}

/// Real diagonal of the interaction operator.
pub fn interaction_diagonal(params: &PhysicalParams, model: &InteractionModel) -> Result<Vec<f64>> {
    let pairs = pair_shifts(params, model)?;
    (0..params.dim())
        .map(|idx| {
            let levels = levels_from_index(idx, params.n_atoms)?;
            Ok(pairs
                .iter()
                .filter(|(a, b, _)| levels[*a] == Level::R && levels[*b] == Level::R)
                .map(|(_, _, v)| v)
                .sum())
        })
        .collect()
}

/// Diagonal van der Waals operator with physical shifts.
pub fn interaction_operator(params: &PhysicalParams) -> ComplexMatrix {
    interaction_operator_with(params, &InteractionModel::default()).expect("validated parameters")
}

pub fn interaction_operator_with(
    params: &PhysicalParams,
    model: &InteractionModel,
) -> Result<ComplexMatrix> {
    let diag: Vec<C64> = interaction_diagonal(params, model)?
        .into_iter()
        .map(|v| C64::new(v, 0.0))
        .collect();
    Ok(ComplexMatrix::from_diagonal(&diag))
}

/// Resonant coupling of one ground level of one atom to `r`.
///
/// Contributes `(rabi/2)|r⟩⟨lower| + h.c.`; an imaginary `rabi = iΩ` gives
/// `iΩ(|r⟩⟨lower| − |lower⟩⟨r|)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub atom: usize,
    pub lower: Level,
    /// Complex Rabi frequency in rad/μs.
    pub rabi: C64,
}

impl Transition {
    pub fn new(atom: usize, lower: Level, rabi: C64) -> Result<Self> {
        if !lower.is_ground() {
            return Err(Error::Construction(
                "a transition must start from g0 or g1".into(),
            ));
        }
        if !(rabi.re.is_finite() && rabi.im.is_finite()) {
            return Err(Error::Numerical("Rabi frequency must be finite".into()));
        }
        Ok(Self { atom, lower, rabi })
    }

    pub fn upper(&self) -> Level {
        Level::R
    }
}

/// Piecewise-constant drive held for `duration` μs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSegment {
    pub label: String,
    pub transitions: Vec<Transition>,
    pub duration: f64,
}

impl PulseSegment {
    pub fn new(
        label: impl Into<String>,
        transitions: Vec<Transition>,
        duration: f64,
    ) -> Result<Self> {
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::Construction(format!(
                "segment duration must be positive, got {duration}"
            )));
        }
        for (i, a) in transitions.iter().enumerate() {
            if transitions[..i]
                .iter()
                .any(|b| b.atom == a.atom && b.lower == a.lower)
            {
                return Err(Error::Construction(format!(
                    "duplicate coupling on atom {} from {}",
                    a.atom, a.lower
                )));
            }
        }
        Ok(Self {
            label: label.into(),
            transitions,
            duration,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum GateKind {
    Deutsch { theta: f64 },
    Toffoli,
    Cnot,
}

impl GateKind {
    pub fn n_atoms(&self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Deutsch { .. } => "deutsch",
            GateKind::Toffoli => "toffoli",
            GateKind::Cnot => "cnot",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateSchedule {
    pub kind: GateKind,
    pub n_atoms: usize,
    pub segments: Vec<PulseSegment>,
}

impl GateSchedule {
    pub fn new(kind: GateKind, n_atoms: usize, segments: Vec<PulseSegment>) -> Result<Self> {
        for seg in &segments {
            if let Some(t) = seg.transitions.iter().find(|t| t.atom >= n_atoms) {
                return Err(Error::Construction(format!(
                    "segment {:?} drives atom {} outside a {n_atoms}-atom register",
                    seg.label, t.atom
                )));
            }
        }
        Ok(Self {
            kind,
            n_atoms,
            segments,
        })
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn durations(&self) -> Vec<f64> {
        self.segments.iter().map(|s| s.duration).collect()
    }

    /// Time between the end of the first segment and the start of the last,
    /// i.e. how long doubly excited controls sit in `r`.
    pub fn inner_duration(&self) -> f64 {
        match self.segments.len() {
            0 | 1 => 0.0,
            n => self.segments[1..n - 1].iter().map(|s| s.duration).sum(),
        }
    }
}

/// Drive part of a segment Hamiltonian (no interaction).
pub fn drive_operator(segment: &PulseSegment, n_atoms: usize) -> Result<ComplexMatrix> {
    let dim = 3usize.pow(n_atoms as u32);
    let mut h = ComplexMatrix::zeros(dim, dim);
    for tr in &segment.transitions {
        if tr.atom >= n_atoms {
            return Err(Error::Construction(format!(
                "atom {} outside a {n_atoms}-atom register",
                tr.atom
            )));
        }
        for idx in 0..dim {
            let mut levels = levels_from_index(idx, n_atoms)?;
            if levels[tr.atom] != tr.lower {
                continue;
            }
            levels[tr.atom] = tr.upper();
            let up = basis_index(&levels);
            h.add_at(up, idx, tr.rabi / 2.0);
            h.add_at(idx, up, tr.rabi.conj() / 2.0);
        }
    }
    Ok(h)
}

/// Physical segment Hamiltonian: drive plus the full interaction operator.
pub fn segment_hamiltonian(
    segment: &PulseSegment,
    params: &PhysicalParams,
) -> Result<ComplexMatrix> {
    segment_hamiltonian_with(segment, params, &InteractionModel::default())
}

pub fn segment_hamiltonian_with(
    segment: &PulseSegment,
    params: &PhysicalParams,
    model: &InteractionModel,
) -> Result<ComplexMatrix> {
    // re-validate: segments may have been built by hand
    let segment = PulseSegment::new(
        segment.label.clone(),
        segment.transitions.clone(),
        segment.duration,
    )?;
    let h = drive_operator(&segment, params.n_atoms)?
        .add(&interaction_operator_with(params, model)?)?;
    debug_assert!(h.is_hermitian(HERMITIAN_TOL));
    Ok(h)
}
