//! The headline composite strategies: large-start, large-drift,
//! bounded-regret, the almost-optimal composite, and the zero-start wrapper.

mod almost_optimal;
mod bounded_regret;
mod large_a;
mod large_q;
mod launch;
pub mod toolkit;
mod zero_start;

pub use almost_optimal::{almost_optimal_strategy, AlmostOptimalStrategy, SigmaStarParams};
pub use bounded_regret::{bounded_regret_strategy, BoundedRegretStrategy};
pub use large_a::{large_a_strategy, LargeAStrategy, LasParams};
pub use large_q::{large_q_strategy, LargeQStrategy, LqsParams};
pub use zero_start::{zero_start_strategy, ZeroStartStrategy};

use crate::strategy::Controller;

/// Sign-flip an already-started controller (used by composites that handle
/// negative starts by playing the mirrored machine).
pub(crate) fn mirror_ctl(inner: Box<dyn Controller>) -> Box<dyn Controller> {
    Box::new(crate::strategy::mirror_controller(inner))
}
