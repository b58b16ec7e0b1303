//! The large-drift strategy: test, control with twice the estimated drift,
//! and hand over to the bounded-regret strategy if the position ever
//! reaches the safety level.
//!
//! Run with: cargo run --example large_drift_strategy

use agnostic_control::analytics::j0;
use agnostic_control::composite::toolkit;
use agnostic_control::config::ExperimentConfig;
use agnostic_control::experiments::estimate_cost;

fn main() -> agnostic_control::SimResult<()> {
    let mut cfg = ExperimentConfig::for_start(5.0);
    cfg.eps = 0.05;
    cfg.eps0 = 0.025;
    cfg.dt = 5e-5;
    cfg.n_paths = 3000;
    cfg.root_seed = 23;
    let las = toolkit::las_from_config(&cfg)?;
    println!(
        "large-drift strategy from q0 = {} (A = {}, safety level {}):",
        cfg.q0, cfg.a_bound, cfg.q0_star
    );
    println!("{:>6} {:>12} {:>12} {:>8}", "a", "mc cost", "j0", "ratio");
    for a in [-10.0, 0.0, 10.0, 40.0, 80.0] {
        let est = estimate_cost(&las, a, &cfg)?;
        let opt = j0(a, cfg.horizon, cfg.q0)?;
        println!(
            "{a:>6} {:>12.2} {:>12.2} {:>8.3}",
            est.mean,
            opt,
            est.mean / opt
        );
    }
    println!("(near-optimal for a >= A; an O(A^2) cap holds below it)");
    Ok(())
}
