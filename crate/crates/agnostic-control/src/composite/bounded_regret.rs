use crate::error::{SimError, SimResult};
use crate::history::History;
use crate::strategy::{Controller, Strategy};
use crate::trajectory::CrossingRecord;

use super::large_q::{large_q_strategy, LqsParams};
use super::{launch::Launched, mirror_ctl};

/// Bounded-regret strategy: multiplicative regret bounded by a constant
/// uniformly in the drift, for any starting position.
///
/// From a start at or above the q_big level this is the large-start strategy
/// itself (mirrored for negative starts). Below it, the control stays off
/// until |q| first reaches q_big, then the large-start strategy plays the
/// remaining horizon from there.
#[derive(Clone, Copy, Debug)]
pub struct BoundedRegretStrategy {
    lqs: LqsParams,
    q_big: f64,
}

pub fn bounded_regret_strategy(lqs: LqsParams, q_big: f64) -> SimResult<BoundedRegretStrategy> {
    if !(q_big > 0.0) {
        return Err(SimError::invalid("br: q_big must be positive"));
    }
    Ok(BoundedRegretStrategy { lqs, q_big })
}

impl Strategy for BoundedRegretStrategy {
    fn label(&self) -> String {
        "br".to_string()
    }

    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        if q0.abs() >= self.q_big {
            // The waiting branch degenerates: identical controls to the
            // large-start strategy.
            return large_q_strategy(self.lqs).start(horizon, q0);
        }
        Ok(Box::new(BrCtl {
            lqs: self.lqs,
            q_big: self.q_big,
            horizon,
            state: BrState::Waiting,
            events: Vec::new(),
        }))
    }
}

enum BrState {
    Waiting,
    Running(Launched),
}

struct BrCtl {
    lqs: LqsParams,
    q_big: f64,
    horizon: f64,
    state: BrState,
    events: Vec<CrossingRecord>,
}

impl Controller for BrCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        let (t, q) = (hist.t(), hist.q_now());
        if let BrState::Waiting = self.state {
            if hist.len() > 1 && q.abs() >= self.q_big {
                self.events
                    .push(CrossingRecord::new("br:reach-q-big", t, Some(self.q_big)));
                let remaining = self.horizon - t;
                let lqs = large_q_strategy(self.lqs);
                let ctl = if q < 0.0 {
                    mirror_ctl(lqs.positive_box(remaining, -q)?)
                } else {
                    lqs.positive_box(remaining, q)?
                };
                self.state = BrState::Running(Launched::new(ctl, t));
            }
        }
        match &mut self.state {
            BrState::Waiting => Ok(0.0),
            BrState::Running(run) => run.step(t, q),
        }
    }

    fn drain_events(&mut self) -> Vec<CrossingRecord> {
        let mut out = std::mem::take(&mut self.events);
        if let BrState::Running(run) = &mut self.state {
            out.append(&mut run.drain_events());
        }
        out
    }
}

impl super::large_q::LargeQStrategy {
    /// Controller for a strictly positive start, boxed (helper for wrappers
    /// that handle mirroring themselves).
    pub(crate) fn positive_box(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        self.start(horizon, q0)
    }
}
