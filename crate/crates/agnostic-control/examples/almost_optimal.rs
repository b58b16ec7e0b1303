//! The almost-optimal composite: a zero-control prologue estimates the
//! drift from one band crossing, then hands the game to the large-drift
//! strategy, the strengthened copy of the given policy, or the
//! bounded-regret fallback.
//!
//! Run with: cargo run --example almost_optimal

use std::sync::Arc;

use agnostic_control::analytics::j0;
use agnostic_control::brownian::BrownianPath;
use agnostic_control::composite::toolkit;
use agnostic_control::config::ExperimentConfig;
use agnostic_control::experiments::estimate_cost;
use agnostic_control::sim::simulate;
use agnostic_control::strategy::{assert_a_bounded, optimal_known_a, Strategy};

fn main() -> agnostic_control::SimResult<()> {
    let mut cfg = ExperimentConfig::for_start(5.0);
    cfg.eps0 = 0.04;
    cfg.dt = 1e-4;
    cfg.n_paths = 2000;
    cfg.root_seed = 31;
    let base: Arc<dyn Strategy> = Arc::new(assert_a_bounded(
        Arc::new(optimal_known_a(1.0)),
        cfg.a_bound,
        cfg.abound_c0,
        cfg.abound_m0,
    )?);
    let star = toolkit::sigma_star_from_config(base.clone(), &cfg)?;

    // Which branch does each drift take? Count over a few hundred paths.
    println!(
        "branch frequencies (prologue band {:.3}):",
        (1.0 + cfg.eps0) * cfg.q0
    );
    println!(
        "{:>6} {:>8} {:>8} {:>8} {:>10}",
        "a", "las", "sbar", "br", "none(T)"
    );
    for a in [-60.0, -1.0, 0.0, 1.0, 60.0] {
        let mut counts = [0usize; 4];
        for i in 0..300u64 {
            let path = BrownianPath::generate_stream(1.0, cfg.dt, cfg.root_seed, i)?;
            let tr = simulate(&star, a, cfg.q0, cfg.horizon, &path)?;
            let slot = match tr.stops.first().map(|e| e.label.as_str()) {
                Some("sigma-star:las") => 0,
                Some("sigma-star:sbar") => 1,
                Some("sigma-star:br") => 2,
                _ => 3,
            };
            counts[slot] += 1;
        }
        println!(
            "{a:>6} {:>8} {:>8} {:>8} {:>10}",
            counts[0], counts[1], counts[2], counts[3]
        );
    }

    println!("\ncosts vs the known-drift optimum:");
    println!(
        "{:>6} {:>12} {:>12} {:>8}",
        "a", "sigma-star", "j0", "ratio"
    );
    for a in [-1.0, 0.0, 1.0] {
        let est = estimate_cost(&star, a, &cfg)?;
        let opt = j0(a, cfg.horizon, cfg.q0)?;
        println!(
            "{a:>6} {:>12.3} {:>12.3} {:>8.3}",
            est.mean,
            opt,
            est.mean / opt
        );
    }
    Ok(())
}
