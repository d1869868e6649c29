//! Complex dense linear algebra and product-basis indexing for registers of
//! three-level atoms.
//!
//! Basis kets are products `|l_0 l_1 ... l_{n-1}⟩` with each level coded as
//! `g0 = 0`, `g1 = 1`, `r = 2`, and the first atom is the most significant
//! digit. Restricting to `{g0, g1}` reproduces the usual qubit ordering
//! `|000⟩, |001⟩, ..., |111⟩`.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative tolerance for the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Absolute tolerance for `‖U†U − I‖_max`.
pub const UNITARY_TOL: f64 = 1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Internal state of a single atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    G0,
    G1,
    R,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::G0, Level::G1, Level::R];

    pub fn code(self) -> usize {
        match self {
            Level::G0 => 0,
            Level::G1 => 1,
            Level::R => 2,
        }
    }

    pub fn from_code(code: usize) -> Result<Self> {
        match code {
            0 => Ok(Level::G0),
            1 => Ok(Level::G1),
            2 => Ok(Level::R),
            _ => Err(Error::Construction(format!("invalid level code {code}"))),
        }
    }

    pub fn is_ground(self) -> bool {
        self != Level::R
    }

    /// Single-character symbol used in ket labels (`0`, `1`, `r`).
    pub fn symbol(self) -> char {
        match self {
            Level::G0 => '0',
            Level::G1 => '1',
            Level::R => 'r',
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Level::G0 => "g0",
            Level::G1 => "g1",
            Level::R => "r",
        };
        f.write_str(s)
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "g0" | "0" => Ok(Level::G0),
            "g1" | "1" => Ok(Level::G1),
            "r" => Ok(Level::R),
            other => Err(Error::Construction(format!(
                "invalid level symbol {other:?}"
            ))),
        }
    }
}

/// Canonical index `Σ_k 3^(n−1−k)·code(level_k)`.
pub fn basis_index(levels: &[Level]) -> usize {
    levels.iter().fold(0, |acc, l| 3 * acc + l.code())
}

/// Inverse of [`basis_index`] for a register of `n_atoms`.
pub fn levels_from_index(index: usize, n_atoms: usize) -> Result<Vec<Level>> {
    let dim = 3usize.pow(n_atoms as u32);
    if index >= dim {
        return Err(Error::Construction(format!(
            "index {index} out of range for {n_atoms} atoms (dimension {dim})"
        )));
    }
    let mut levels = vec![Level::G0; n_atoms];
    let mut rest = index;
    for slot in levels.iter_mut().rev() {
        *slot = Level::from_code(rest % 3)?;
        rest /= 3;
    }
    Ok(levels)
}

/// Parses a ket label such as `"rr0"` or `"110"` into levels.
pub fn parse_ket(label: &str) -> Result<Vec<Level>> {
    let body = label
        .trim()
        .trim_start_matches('|')
        .trim_end_matches(['⟩', '>']);
    if body.is_empty() {
        return Err(Error::Construction("empty ket label".into()));
    }
    body.chars().map(|c| c.to_string().parse()).collect()
}

pub fn ket_label(levels: &[Level]) -> String {
    levels.iter().map(|l| l.symbol()).collect()
}

/// Full-space indices of the `2^n` computational kets, in qubit order.
pub fn computational_indices(n_atoms: usize) -> Vec<usize> {
    (0..1usize << n_atoms)
        .map(|bits| {
            let levels: Vec<Level> = (0..n_atoms)
                .map(|k| {
                    if (bits >> (n_atoms - 1 - k)) & 1 == 1 {
                        Level::G1
                    } else {
                        Level::G0
                    }
                })
                .collect();
            basis_index(&levels)
        })
        .collect()
}

/// Qubit labels (`"000"`, `"001"`, ...) matching [`computational_indices`].
pub fn computational_labels(n_atoms: usize) -> Vec<String> {
    (0..1usize << n_atoms)
        .map(|bits| format!("{bits:0width$b}", width = n_atoms))
        .collect()
}

/// Dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Construction(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{} entries ({rows}x{cols})", rows * cols),
                found: format!("{} entries", entries.len()),
            });
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn from_inner(inner: DMatrix<C64>) -> Self {
        Self(inner)
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.0[(row, col)] = value;
    }

    pub fn add_at(&mut self, row: usize, col: usize, value: C64) {
        self.0[(row, col)] += value;
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn column(&self, col: usize) -> StateVector {
        StateVector(self.0.column(col).into_owned())
    }

    pub fn scale_column(&mut self, col: usize, factor: C64) {
        self.0.column_mut(col).iter_mut().for_each(|z| *z *= factor);
    }

    /// Matrix product with a dimension check.
    pub fn dot(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols()),
                found: format!("{} rows", rhs.rows()),
            });
        }
        Ok(Self(&self.0 * &rhs.0))
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<Self> {
        if self.0.shape() != rhs.0.shape() {
            return Err(Error::DimensionMismatch {
                expected: format!("{:?}", self.0.shape()),
                found: format!("{:?}", rhs.0.shape()),
            });
        }
        Ok(Self(&self.0 + &rhs.0))
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.cols() != state.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("state of dimension {}", self.cols()),
                found: format!("dimension {}", state.dim()),
            });
        }
        Ok(StateVector(&self.0 * &state.0))
    }

    /// Restriction to the given row and column indices, in the order given.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self(DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.0[(rows[i], cols[j])]
        }))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise `max |A_ij − B_ij|`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.0.shape() != other.0.shape() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `M = M†` entrywise within `tol` relative to the largest entry.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs().max(1.0);
        let n = self.rows();
        (0..n)
            .all(|i| (i..n).all(|j| (self.0[(i, j)] - self.0[(j, i)].conj()).norm() <= tol * scale))
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = self.0.adjoint() * &self.0;
        let id = DMatrix::<C64>::identity(self.rows(), self.cols());
        gram.iter()
            .zip(id.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() < tol
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.rows();
        (0..n).all(|i| (0..self.cols()).all(|j| i == j || self.0[(i, j)] == ZERO))
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on a dimension mismatch; use [`ComplexMatrix::dot`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

/// State vector over a full register space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(DVector<C64>);

impl StateVector {
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Construction("state vector must be non-empty".into()));
        }
        Ok(Self(DVector::from_vec(amplitudes)))
    }

    /// Basis ket `|index⟩` in a space of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::Construction(format!(
                "basis index {index} >= dimension {dim}"
            )));
        }
        let mut v = DVector::zeros(dim);
        v[index] = ONE;
        Ok(Self(v))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.0[index]
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.0[index].norm_sqr()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.0.dotc(&other.0)
    }
}

/// Kronecker product `A ⊗ B`, consistent with [`basis_index`] ordering.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Embeds a single-atom operator acting on `atom` into an `n_atoms` register.
pub fn embed_single_atom(op: &ComplexMatrix, atom: usize, n_atoms: usize) -> Result<ComplexMatrix> {
    if op.rows() != 3 || op.cols() != 3 {
        return Err(Error::DimensionMismatch {
            expected: "3x3 single-atom operator".into(),
            found: format!("{}x{}", op.rows(), op.cols()),
        });
    }
    if atom >= n_atoms {
        return Err(Error::Construction(format!(
            "atom {atom} outside a {n_atoms}-atom register"
        )));
    }
    let id = ComplexMatrix::identity(3);
    let mut out = if atom == 0 { op.clone() } else { id.clone() };
    for k in 1..n_atoms {
        out = tensor_product(&out, if k == atom { op } else { &id });
    }
    Ok(out)
}

/// `exp(−iHt)`.
///
/// Hermitian `H` goes through an eigendecomposition, which is exact up to
/// rounding for the small dimensions used here. Anything else (effective
/// non-Hermitian Hamiltonians with decay) uses scaling and squaring with a
/// Padé approximant; the result is then a contraction rather than unitary.
pub fn matrix_exponential(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    check_exponent_args(h, t)?;
    let out = if h.is_hermitian(HERMITIAN_TOL) {
        hermitian_exponential(h, t)
    } else {
        general_exponential(h, t)
    };
    if !out.is_finite() {
        return Err(Error::Numerical(
            "matrix exponential produced non-finite entries".into(),
        ));
    }
    Ok(out)
}

fn check_exponent_args(h: &ComplexMatrix, t: f64) -> Result<()> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            found: format!("{}x{}", h.rows(), h.cols()),
        });
    }
    if !h.is_finite() {
        return Err(Error::Numerical(
            "Hamiltonian has non-finite entries".into(),
        ));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!(
            "evolution time must be finite and >= 0, got {t}"
        )));
    }
    Ok(())
}

/// `exp(−iHt)` through `H = QΛQ†`. Assumes `H` is Hermitian.
pub fn hermitian_exponential(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let eig = h.0.clone().symmetric_eigen();
    let phases = eig
        .eigenvalues
        .map(|lambda| C64::from_polar(1.0, -lambda * t));
    let q = &eig.eigenvectors;
    let mut scaled = q.clone();
    for (j, phase) in phases.iter().enumerate() {
        scaled.column_mut(j).iter_mut().for_each(|z| *z *= *phase);
    }
    ComplexMatrix(scaled * q.adjoint())
}

/// `exp(−iHt)` by Padé scaling and squaring; valid for any square `H`.
pub fn general_exponential(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    ComplexMatrix((&h.0 * C64::new(0.0, -t)).exp())
}
