//! Deutsch angle as a function of the Λ-pulse ratio r = Ω₂/Ω₁, and its inverse.
//!
//! cargo run --example theta_tunability

use std::f64::consts::PI;

use rydberg_gates::schedule::{ratio_from_theta, theta_from_ratio, RATIO_MAX, RATIO_MIN};

fn main() -> rydberg_gates::Result<()> {
    println!("{:>10} {:>12} {:>10}", "r", "theta/pi", "r(theta)");
    for k in 0..=10 {
        let r = RATIO_MIN + (RATIO_MAX - RATIO_MIN) * k as f64 / 10.0;
        let theta = theta_from_ratio(r)?;
        println!(
            "{r:>10.6} {:>12.6} {:>10.6}",
            theta / PI,
            ratio_from_theta(theta)?
        );
    }
    // Outside [√2−1, √2+1] the angle goes negative rather than wrapping.
    println!("\nr = 3: theta/pi = {:.6}", theta_from_ratio(3.0)? / PI);
    Ok(())
}
