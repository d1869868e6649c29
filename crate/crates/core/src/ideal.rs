//! Target gate matrices and fidelity metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::GateKind;
use crate::qcore::{ComplexMatrix, C64, I, ONE};

#[derive(Clone, Debug, PartialEq)]
pub struct IdealGate {
    pub kind: GateKind,
    pub matrix: ComplexMatrix,
}

/// `D(θ)`: identity on `|000⟩..|101⟩`, `[[i cosθ, sinθ], [sinθ, i cosθ]]`
/// on `|110⟩, |111⟩`.
pub fn deutsch_ideal(theta: f64) -> Result<IdealGate> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::Domain(format!(
            "theta must lie in [0, pi], got {theta}"
        )));
    }
    Ok(IdealGate {
        kind: GateKind::Deutsch { theta },
        matrix: deutsch_matrix(theta),
    })
}

/// `D(θ)` for any real θ, without the range check.
pub fn deutsch_matrix(theta: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::identity(8);
    let diag = I * theta.cos();
    let off = C64::new(theta.sin(), 0.0);
    m.set(6, 6, diag);
    m.set(7, 7, diag);
    m.set(6, 7, off);
    m.set(7, 6, off);
    m
}

fn permutation(images: &[usize]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(images.len(), images.len());
    for (col, &row) in images.iter().enumerate() {
        m.set(row, col, ONE);
    }
    m
}

pub fn toffoli_ideal() -> IdealGate {
    IdealGate {
        kind: GateKind::Toffoli,
        matrix: permutation(&[0, 1, 2, 3, 4, 5, 7, 6]),
    }
}

pub fn cnot_ideal() -> IdealGate {
    IdealGate {
        kind: GateKind::Cnot,
        matrix: permutation(&[0, 1, 3, 2]),
    }
}

pub fn ideal_for(kind: &GateKind) -> Result<IdealGate> {
    match kind {
        GateKind::Deutsch { theta } => Ok(IdealGate {
            kind: *kind,
            matrix: deutsch_matrix(*theta),
        }),
        GateKind::Toffoli => Ok(toffoli_ideal()),
        GateKind::Cnot => Ok(cnot_ideal()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityMode {
    /// `|Tr(U_ideal† U_sim)| / d`.
    Trace,
    /// Mean over computational inputs of `|⟨ideal_out|sim_out⟩|²`.
    StateAverage,
}

/// Global-phase invariant fidelity in `[0, 1]`.
///
/// Simulated blocks are not renormalized, so leaked population lowers both
/// modes. `StateAverage` only sees each column up to its own phase; relative
/// phases between inputs show up in `Trace` only.
pub fn gate_fidelity(
    sim: &ComplexMatrix,
    ideal: &ComplexMatrix,
    mode: FidelityMode,
) -> Result<f64> {
    if sim.rows() != ideal.rows() || sim.cols() != ideal.cols() || !sim.is_square() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", ideal.rows(), ideal.cols()),
            found: format!("{}x{}", sim.rows(), sim.cols()),
        });
    }
    let d = sim.cols();
    let f = match mode {
        FidelityMode::Trace => ideal.adjoint().dot(sim)?.trace().norm() / d as f64,
        FidelityMode::StateAverage => {
            (0..d)
                .map(|k| ideal.column(k).inner(&sim.column(k)).norm_sqr())
                .sum::<f64>()
                / d as f64
        }
    };
    Ok(f.clamp(0.0, 1.0))
}

pub fn infidelity(sim: &ComplexMatrix, ideal: &ComplexMatrix, mode: FidelityMode) -> Result<f64> {
    Ok(1.0 - gate_fidelity(sim, ideal, mode)?)
}
