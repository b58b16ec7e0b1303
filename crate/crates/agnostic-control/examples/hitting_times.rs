//! First-passage frequencies of the uncontrolled system: the reflection
//! principle check and the band-exit races the composite strategies are
//! built on.
//!
//! Run with: cargo run --example hitting_times

use agnostic_control::config::ExperimentConfig;
use agnostic_control::experiments::{hitting_experiment, reflection_oracle, HittingSpec};

fn main() -> agnostic_control::SimResult<()> {
    // Reflection principle: P(sup W >= 1 by t = 1) = 2 Phi(-1) ~ 0.3173.
    let mut cfg = ExperimentConfig::for_start(0.0);
    cfg.q0_star = 4.0;
    cfg.q_rare = 1.0;
    cfg.n_paths = 20_000;
    cfg.dt = 1e-4;
    cfg.root_seed = 2;
    let rep = hitting_experiment(
        0.0,
        0.0,
        HittingSpec {
            abs_level: Some(1.0),
            ..Default::default()
        },
        &cfg,
    )?;
    let row = rep.freq("up-level-ever").unwrap();
    println!(
        "P(sup W >= 1) = {:.4} +/- {:.4}   (2*Gaussian tail = {:.4})",
        row.freq,
        row.se,
        reflection_oracle(0.0, 1.0, 1.0)
    );

    // Band races from q0 = 5 under a few drifts.
    let cfg = ExperimentConfig {
        n_paths: 10_000,
        dt: 1e-4,
        root_seed: 3,
        ..ExperimentConfig::for_start(5.0)
    };
    println!("\nband exits from q0 = 5, eps = 0.1, far level 10, cap 0.0316:");
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>14} {:>14}",
        "a", "up-first", "down-first", "cap", "star-before-up", "ever-|q|>=10"
    );
    for a in [-20.0, -1.0, 0.0, 1.0, 30.0] {
        let rep = hitting_experiment(
            a,
            5.0,
            HittingSpec {
                eps: Some(0.1),
                q0_star: Some(10.0),
                t_max: Some(0.0316),
                abs_level: None,
            },
            &cfg,
        )?;
        let g = |label: &str| rep.freq(label).map(|r| r.freq).unwrap_or(f64::NAN);
        println!(
            "{a:>6} {:>10.4} {:>10.4} {:>10.4} {:>14.4} {:>14.4}",
            g("up-first"),
            g("down-first"),
            g("cap"),
            g("down-star-before-up"),
            g("ever-abs-star")
        );
    }
    Ok(())
}
