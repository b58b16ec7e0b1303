//! Additive / multiplicative / hybrid regret of a fixed constant-gain
//! strategy across a drift grid, with the worst-case summary.
//!
//! Run with: cargo run --example regret_curve

use agnostic_control::config::ExperimentConfig;
use agnostic_control::experiments::{regret_curve, worst_case_regret, RegretKind};
use agnostic_control::strategy::constant_gain;

fn main() -> agnostic_control::SimResult<()> {
    let cfg = ExperimentConfig {
        n_paths: 4000,
        root_seed: 99,
        ..ExperimentConfig::default()
    };
    let grid: Vec<f64> = (0..=10).map(|k| -5.0 + k as f64).collect();
    let cg = constant_gain(2.0)?;
    let report = regret_curve(&cg, &grid, &cfg, cfg.gamma)?;

    println!("regret of CG(2) over a in [-5, 5] (gamma = {}):", cfg.gamma);
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "a", "mean", "j0", "AR", "MR", "HR"
    );
    for row in &report.rows {
        println!(
            "{:>6} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            row.a, row.mean, row.j0, row.ar, row.mr, row.hr
        );
    }
    for kind in [
        RegretKind::Additive,
        RegretKind::Multiplicative,
        RegretKind::Hybrid,
    ] {
        let wc = worst_case_regret(&report, kind)?;
        println!(
            "worst-case {:?} = {:.4} at a = {} (edge hints {:?})",
            kind, wc.value, wc.argmax_a, wc.edge_hint
        );
    }
    Ok(())
}
