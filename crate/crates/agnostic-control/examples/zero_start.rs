//! Starting from the origin: wait (at zero cost drift-free) until the
//! position first reaches a small level, then play the almost-optimal
//! composite from there, mirrored if the exit was downward.
//!
//! Run with: cargo run --example zero_start

use std::sync::Arc;

use agnostic_control::composite::{toolkit, zero_start_strategy};
use agnostic_control::config::ExperimentConfig;
use agnostic_control::experiments::estimate_cost;
use agnostic_control::strategy::{assert_a_bounded, optimal_known_a, Strategy};

fn main() -> agnostic_control::SimResult<()> {
    let eps = 0.1;
    let mut cfg = ExperimentConfig::for_start(eps);
    cfg.eps0 = 0.05;
    cfg.dt = 1e-4;
    cfg.n_paths = 2000;
    cfg.root_seed = 37;
    let base: Arc<dyn Strategy> = Arc::new(assert_a_bounded(
        Arc::new(optimal_known_a(1.0)),
        cfg.a_bound,
        cfg.abound_c0,
        cfg.abound_m0,
    )?);
    let star = Arc::new(toolkit::sigma_star_from_config(base, &cfg)?);
    let zs = zero_start_strategy(star.clone(), eps)?;

    let mut zs_cfg = cfg.clone();
    zs_cfg.q0 = 0.0;
    zs_cfg.q0_star = 4.0;
    zs_cfg.q_rare = 4.0 * eps;
    println!("zero-start wrapper (launch level {eps}):");
    println!("{:>6} {:>14} {:>16}", "a", "cost from 0", "cost from eps");
    for a in [-2.0, 0.0, 2.0] {
        let from_zero = estimate_cost(&zs, a, &zs_cfg)?;
        let mut star_cfg = cfg.clone();
        star_cfg.q0 = eps;
        let from_eps = estimate_cost(star.as_ref(), a, &star_cfg)?;
        println!("{a:>6} {:>14.4} {:>16.4}", from_zero.mean, from_eps.mean);
    }
    println!("(cost from 0 <= T*eps + cost from eps, up to noise)");
    Ok(())
}
