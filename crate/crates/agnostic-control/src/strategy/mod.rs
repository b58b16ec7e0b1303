//! The strategy abstraction: immutable blueprints that spawn per-path
//! controllers, plus the primitive strategies and combinators built on it.

mod abar;
mod combinators;
mod primitives;
pub mod registry;

pub use abar::{estimate_abar, AbarEstimate, AbarSign};
pub use combinators::{
    assert_a_bounded, branch, guard_with_lqs, guard_with_lqs_extra, mirror, rescale, ABounded,
    Branch, BranchPoint, Continuation, GuardedStrategy, LevelTrigger, LqsFactory, Mirror, Rescale,
    StopRule,
};
pub use primitives::{
    constant_gain, optimal_known_a, simple_feedback, ConstantGain, OptimalKnownA, SimpleFeedback,
};

/// Sign-flip an already-started controller; see [`Mirror`] for the
/// blueprint-level combinator.
pub fn mirror_controller(inner: Box<dyn Controller>) -> impl Controller {
    combinators::MirrorCtl::new(inner)
}

use crate::error::SimResult;
use crate::history::History;
use crate::trajectory::CrossingRecord;

/// A control policy blueprint. Blueprints are immutable and shareable across
/// threads; all per-path mutable state lives in the [`Controller`] created by
/// [`Strategy::start`].
///
/// A blueprint is horizon-generic: `start(horizon, q0)` binds it to a
/// concrete game, mirroring the convention that a strategy for a longer
/// horizon restricts to any shorter one.
pub trait Strategy: Send + Sync {
    /// Registry-style name, e.g. `cg:1`, `opt:0.5`, `lqs`.
    fn label(&self) -> String;

    /// Create the per-path state for a game over `[0, horizon]` starting at
    /// `q0`. Fails on arguments the strategy is not defined for.
    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>>;
}

/// Per-path mutable state. `control` is called once per grid time in
/// increasing order; the history view ends at the current `(t, q)` and is
/// all a controller may read, so a policy cannot peek at the future, the
/// noise, or the drift.
pub trait Controller: Send {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64>;

    /// Hand over any events recorded so far (phase entries, crossings).
    /// Called once after the path completes; times are in the caller's clock.
    fn drain_events(&mut self) -> Vec<CrossingRecord> {
        Vec::new()
    }
}

impl<S: Strategy + ?Sized> Strategy for std::sync::Arc<S> {
    fn label(&self) -> String {
        (**self).label()
    }

    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        (**self).start(horizon, q0)
    }
}
