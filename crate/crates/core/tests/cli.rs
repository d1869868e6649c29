use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rydberg-gates"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rydberg-gates-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn config(name: &str, json: &str) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn run_json(args: &[&str]) -> Value {
    serde_json::from_slice(&run(args).stdout).unwrap()
}

#[test]
fn sweep_csv_is_deterministic_and_well_formed() {
    let a = run(&["sweep"]).stdout;
    let b = run(&["sweep"]).stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "omega_bar_MHz,T_g_us,E_decay_4K,E_bl,E_2ph,total_4K,E_decay_300K,total_300K,phi_rad"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 115);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
    let best = rows.iter().min_by(|x, y| x[5].total_cmp(&y[5])).unwrap();
    assert!((best[0] - 0.54).abs() < 1e-9 && (best[5] - 6.7e-3).abs() / 6.7e-3 < 0.1);
}

#[test]
fn sweep_honours_out_and_grid_step() {
    let out = scratch("sweep.csv");
    let run = run(&[
        "sweep",
        "--grid-step",
        "0.1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(run.stdout.is_empty());
    let summary: Value = serde_json::from_slice(&run.stderr).unwrap();
    assert_eq!(summary["config"]["grid_step_mhz"], 0.1);
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(
        text.lines().count(),
        1 + summary["points"].as_u64().unwrap() as usize
    );
}

#[test]
fn simulate_cnot_at_reference_point() {
    let cfg = config("cnot.json", r#"{"gate": "cnot"}"#);
    let report = run_json(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert!(report["fidelity"]["state_average"].as_f64().unwrap() > 0.99);
    assert_eq!(report["config"]["gate"], "cnot");
}

#[test]
fn simulate_deutsch_in_blockade_limit() {
    let cfg = config(
        "strong.json",
        r#"{"gate": "deutsch", "cc_interaction": "none"}"#,
    );
    let report = run_json(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--v-scale",
        "1000",
    ]);
    assert_eq!(report["config"]["v_scale"], 1000.0);
    assert!(report["infidelity"]["state_average"].as_f64().unwrap() < 1e-4);
}

#[test]
fn simulate_with_decay_matches_budget() {
    let cfg = config("decay.json", r#"{"decay": "effective", "tau_us": 1590}"#);
    let report = run_json(&["simulate", "--config", cfg.to_str().unwrap()]);
    let loss = report["mean_norm_loss"].as_f64().unwrap();
    let budget = report["analytic"]["decay"].as_f64().unwrap();
    assert!((loss - budget).abs() / budget < 0.1, "{loss} vs {budget}");
}

#[test]
fn synth_reports_schedules() {
    let deutsch = run_json(&["synth", "--json"]);
    assert!((deutsch["theta"].as_f64().unwrap().sin() - 0.28).abs() < 1e-12);
    let cfg = config("toffoli.json", r#"{"gate": "toffoli"}"#);
    let toffoli = run_json(&["synth", "--json", "--config", cfg.to_str().unwrap()]);
    assert_eq!(toffoli["segments"].as_array().unwrap().len(), 3);
    let cfg = config("half.json", r#"{"theta": 1.5707963267948966}"#);
    let half = run_json(&["synth", "--json", "--config", cfg.to_str().unwrap()]);
    assert!((half["config"]["ratio_omega2_over_omega1"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    let text = String::from_utf8(run(&["synth"]).stdout).unwrap();
    assert!(text.contains("theta") && text.contains("[5]"));
}

#[test]
#[allow(clippy::approx_constant)]
fn phase_reports_matching_solutions() {
    let report = run_json(&["phase"]);
    let solutions = report["solutions"].as_array().unwrap();
    assert!((solutions[0]["omega_bar_mhz"].as_f64().unwrap() - 0.636).abs() < 0.005);
    assert!((solutions[1]["omega_bar_mhz"].as_f64().unwrap() - 0.318).abs() < 0.005);
    assert!(report["phi_rad"].as_f64().unwrap() > 0.0);
}

#[test]
fn budget_temperature_flag_selects_lifetime() {
    let report = run_json(&["budget", "--temperature", "300K"]);
    assert_eq!(report["config"]["tau_us"], 313.0);
    assert!(
        report["selected"]["total"].as_f64().unwrap() > report["4.2K"]["total"].as_f64().unwrap()
    );
}

#[test]
fn invalid_input_fails_with_message() {
    let both = config(
        "both.json",
        r#"{"theta": 1.0, "ratio_omega2_over_omega1": 2.0}"#,
    );
    let unknown = config("unknown.json", r#"{"omega_bar": 1.0}"#);
    for args in [
        vec!["simulate", "--config", both.to_str().unwrap()],
        vec!["simulate", "--config", unknown.to_str().unwrap()],
        vec!["sweep", "--grid-step", "-1"],
        vec!["budget", "--temperature", "77K"],
        vec!["phase", "--config", "/nonexistent/config.json"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
    }
}
