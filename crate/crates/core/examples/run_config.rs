//! Drives the command layer from a JSON config, as the binary does.
//!
//! cargo run --example run_config -- '{"gate": "cnot", "omega_bar_mhz": 0.8}'

use rydberg_gates::cli::{cmd_simulate, RunConfig};

fn main() -> rydberg_gates::Result<()> {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| r#"{"gate": "toffoli"}"#.to_string());
    let config = RunConfig::from_json(&text)?.resolve()?;
    let report = cmd_simulate(&config)?;
    println!("gate            {}", report["gate"]);
    println!("state average F {}", report["fidelity"]["state_average"]);
    println!("leakage         {}", report["leakage"]);
    Ok(())
}
