//! Unit conversions between the "Ω/2π in MHz" convention and rad/μs.

use std::f64::consts::TAU;

/// Ω/2π in MHz → Ω in rad/μs.
pub fn mhz(value: f64) -> f64 {
    TAU * value
}

/// Ω in rad/μs → Ω/2π in MHz.
pub fn to_mhz(angular: f64) -> f64 {
    angular / TAU
}
