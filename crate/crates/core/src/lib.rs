//! Pulse-level simulation and analytic error budgets for Rydberg-blockade
//! gates on neutral atoms.
//!
//! Registers are linear chains of three-level atoms (`g0`, `g1`, `r`). A
//! three-atom register is ordered `(control 1, control 2, target)` with the
//! target in the middle of the chain; a two-atom register is
//! `(control, target)`. All angular frequencies are in rad/μs and all times
//! in μs; helpers in [`units`] convert from the "Ω/2π in MHz" convention.
//!
//! The crate is organised bottom-up:
//!
//! - [`qcore`]: dense complex matrices, basis indexing, exact exponentials.
//! - [`model`]: physical parameters, van der Waals shifts, segment Hamiltonians.
//! - [`schedule`]: Deutsch / Toffoli / CNOT pulse schedules, θ ↔ Rabi ratios,
//!   phase matching.
//! - [`evolve`]: segment-exact propagation, leakage, dwell times, decay.
//! - [`ideal`]: target gate matrices and fidelity metrics.
//! - [`budget`]: closed-form error budget and parameter sweeps.
//! - [`cli`]: JSON configuration, command implementations and CSV output.

// `!(x > 0.0)` is used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod budget;
pub mod cli;
pub mod error;
pub mod evolve;
pub mod ideal;
pub mod model;
pub mod qcore;
pub mod schedule;
pub mod units;

pub use error::{Error, Result};
