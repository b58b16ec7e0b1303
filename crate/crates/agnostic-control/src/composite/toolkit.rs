//! Assembly of composite strategies from an [`ExperimentConfig`]: every
//! sub-strategy a composite needs, built with the shared constants.

use std::sync::Arc;

use crate::config::ExperimentConfig;
use crate::error::SimResult;
use crate::strategy::{mirror, LqsFactory, Strategy};

use super::{
    almost_optimal_strategy, bounded_regret_strategy, large_a_strategy, large_q_strategy,
    zero_start_strategy, AlmostOptimalStrategy, BoundedRegretStrategy, LargeAStrategy,
    LargeQStrategy, LasParams, LqsParams, SigmaStarParams, ZeroStartStrategy,
};

pub fn lqs_params(cfg: &ExperimentConfig) -> SimResult<LqsParams> {
    LqsParams::new(cfg.eps, cfg.c0, cfg.a1)
}

pub fn lqs_from_config(cfg: &ExperimentConfig) -> SimResult<LargeQStrategy> {
    Ok(large_q_strategy(lqs_params(cfg)?))
}

pub fn br_from_config(cfg: &ExperimentConfig) -> SimResult<BoundedRegretStrategy> {
    bounded_regret_strategy(lqs_params(cfg)?, cfg.q_big)
}

pub fn las_from_config(cfg: &ExperimentConfig) -> SimResult<LargeAStrategy> {
    let br = br_from_config(cfg)?;
    Ok(large_a_strategy(
        LasParams::new(cfg.eps, cfg.q0_star, cfg.a_bound)?,
        Arc::new(br),
    ))
}

/// Continuation factory for guards: hands out the large-start strategy
/// (mirrored when entered from below) for whatever horizon the guard needs.
pub fn lqs_factory_from_config(cfg: &ExperimentConfig) -> SimResult<LqsFactory> {
    let params = lqs_params(cfg)?;
    Ok(Arc::new(move |_horizon: f64, entry: f64| {
        let lqs = Arc::new(large_q_strategy(params));
        if entry < 0.0 {
            Arc::new(mirror(lqs)) as Arc<dyn Strategy>
        } else {
            lqs as Arc<dyn Strategy>
        }
    }))
}

pub fn sigma_star_params(cfg: &ExperimentConfig) -> SimResult<SigmaStarParams> {
    SigmaStarParams::new(cfg.eps, cfg.eps0, cfg.a_bound, cfg.q_rare, cfg.q0_star)
}

/// The almost-optimal composite over an (already A-bound-checked) base.
pub fn sigma_star_from_config(
    base: Arc<dyn Strategy>,
    cfg: &ExperimentConfig,
) -> SimResult<AlmostOptimalStrategy> {
    almost_optimal_strategy(
        base,
        sigma_star_params(cfg)?,
        Arc::new(las_from_config(cfg)?),
        Arc::new(br_from_config(cfg)?),
        lqs_factory_from_config(cfg)?,
    )
}

/// Zero-start wrapper around the almost-optimal composite: waits at the
/// origin until |q| = eps0 and then plays sigma-star from there.
pub fn zero_start_from_config(
    base: Arc<dyn Strategy>,
    cfg: &ExperimentConfig,
) -> SimResult<ZeroStartStrategy> {
    let star = sigma_star_from_config(base, cfg)?;
    zero_start_strategy(Arc::new(star), cfg.eps0)
}
