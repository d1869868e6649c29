use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rydberg_gates::budget::Temperature;
use rydberg_gates::cli::{self, Overrides, RunConfig};

/// Rydberg-blockade Deutsch / Toffoli / CNOT gates: schedules, simulation
/// and error budgets.
///
/// Frequencies in the JSON config are Omega/2pi in MHz (Omega = 2*pi*value
/// rad/us); times are in microseconds.
#[derive(Parser)]
#[command(name = "rydberg-gates", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; missing fields take reference defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Multiplier on the control-target blockade shift.
    #[arg(long, global = true)]
    v_scale: Option<f64>,
    /// Sweep grid step in Omega_bar/2pi, MHz.
    #[arg(long, global = true)]
    grid_step: Option<f64>,
    /// 4.2K or 300K; sets the Rydberg lifetime.
    #[arg(long, global = true)]
    temperature: Option<Temperature>,
}

#[derive(Subcommand)]
enum Command {
    /// List the pulse schedule and derived drive quantities.
    Synth {
        /// Emit JSON instead of the text listing.
        #[arg(long)]
        json: bool,
    },
    /// Propagate the gate and report fidelities, leakage and dwell times.
    Simulate,
    /// Error budget versus Omega_bar as CSV.
    Sweep,
    /// Closed-form error budget at the configured point.
    Budget,
    /// Phase accumulation and phase-matching solutions.
    Phase,
}

fn run(args: Args) -> rydberg_gates::Result<String> {
    let mut config = match &args.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    Overrides {
        v_scale: args.v_scale,
        grid_step_mhz: args.grid_step,
        temperature: args.temperature,
    }
    .apply(&mut config);
    let config = config.resolve()?;
    let pretty = |v: &serde_json::Value| serde_json::to_string_pretty(v).map(|s| s + "\n");
    Ok(match args.command {
        Command::Synth { json: true } => pretty(&cli::cmd_synth(&config)?)?,
        Command::Synth { json: false } => cli::render_synth(&cli::cmd_synth(&config)?),
        Command::Simulate => pretty(&cli::cmd_simulate(&config)?)?,
        Command::Budget => pretty(&cli::cmd_budget(&config)?)?,
        Command::Phase => pretty(&cli::cmd_phase(&config)?)?,
        Command::Sweep => {
            let (csv, summary) = cli::cmd_sweep(&config)?;
            eprintln!("{}", serde_json::to_string(&summary)?);
            csv
        }
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let out = args.out.clone();
    match run(args) {
        Ok(text) => {
            let written = match out {
                Some(path) => std::fs::write(&path, text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
