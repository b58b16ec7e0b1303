//! The large-start strategy: estimate the drift from a short uncontrolled
//! prologue, then play the belief-matched law. From a high start its cost
//! stays within a few percent of the known-drift optimum, uniformly in a.
//!
//! Run with: cargo run --example large_start_strategy

use agnostic_control::analytics::j0;
use agnostic_control::composite::toolkit;
use agnostic_control::config::ExperimentConfig;
use agnostic_control::experiments::estimate_cost;

fn main() -> agnostic_control::SimResult<()> {
    let mut cfg = ExperimentConfig::for_start(25.0);
    cfg.eps = 0.05;
    cfg.eps0 = 0.025;
    cfg.dt = 2e-4;
    cfg.n_paths = 4000;
    cfg.root_seed = 17;
    let lqs = toolkit::lqs_from_config(&cfg)?;
    println!(
        "large-start strategy from q0 = {} (eps = {}, cap = {:.4}):",
        cfg.q0,
        cfg.eps,
        cfg.c0 * cfg.eps.sqrt()
    );
    println!("{:>6} {:>12} {:>12} {:>8}", "a", "mc cost", "j0", "ratio");
    for a in [-20.0, -5.0, -1.0, 0.0, 1.0, 5.0, 20.0] {
        let est = estimate_cost(&lqs, a, &cfg)?;
        let opt = j0(a, cfg.horizon, cfg.q0)?;
        println!(
            "{a:>6} {:>12.2} {:>12.2} {:>8.4}",
            est.mean,
            opt,
            est.mean / opt
        );
    }
    Ok(())
}
