//! Monte Carlo cost estimation against the closed-form oracle: CG(1) at
//! a = 1 has expected cost exactly 3.
//!
//! Run with: cargo run --example estimate_cost

use agnostic_control::analytics::cg_cost;
use agnostic_control::config::ExperimentConfig;
use agnostic_control::experiments::estimate_cost;
use agnostic_control::strategy::constant_gain;

fn main() -> agnostic_control::SimResult<()> {
    let cfg = ExperimentConfig {
        n_paths: 10_000,
        root_seed: 7,
        ..ExperimentConfig::default()
    };
    println!("CG(alpha) at T = 1, q0 = 1, {} paths:", cfg.n_paths);
    println!(
        "{:>6} {:>6} {:>12} {:>10} {:>12} {:>8}",
        "alpha", "a", "mc mean", "se", "closed form", "z-score"
    );
    for alpha in [0.0, 1.0, 3.0] {
        let cg = constant_gain(alpha)?;
        for a in [-5.0, -1.0, 0.0, 1.0, 3.0] {
            let est = estimate_cost(&cg, a, &cfg)?;
            let oracle = cg_cost(alpha, a, cfg.horizon, cfg.q0)?;
            println!(
                "{alpha:>6} {a:>6} {:>12.5} {:>10.5} {:>12.5} {:>8.2}",
                est.mean,
                est.std_error,
                oracle,
                (est.mean - oracle) / est.std_error
            );
        }
    }
    Ok(())
}
