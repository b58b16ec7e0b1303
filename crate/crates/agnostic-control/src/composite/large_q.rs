use crate::analytics::kappa;
use crate::error::{SimError, SimResult};
use crate::history::History;
use crate::strategy::{Controller, Strategy};
use crate::trajectory::CrossingRecord;

use super::mirror_ctl;

/// Parameters of the large-start strategy. The prologue cap is
/// t_max = c0 sqrt(eps); the drift-size thresholds a_tiny = sqrt(eps) and
/// a_small = eps^{1/4} calibrate which band exits are probable where.
#[derive(Clone, Copy, Debug)]
pub struct LqsParams {
    pub eps: f64,
    pub t_max: f64,
    pub a1: f64,
    pub a_tiny: f64,
    pub a_small: f64,
}

impl LqsParams {
    pub fn new(eps: f64, c0: f64, a1: f64) -> SimResult<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(SimError::invalid(format!(
                "lqs: eps must be in (0,1), got {eps}"
            )));
        }
        if !(c0 > 0.0) {
            return Err(SimError::invalid("lqs: c0 must be positive"));
        }
        let a_tiny = eps.sqrt();
        let a_small = eps.powf(0.25);
        if !(a1 > a_small) {
            return Err(SimError::invalid(format!(
                "lqs: belief threshold a1 = {a1} must exceed a_small = {a_small}"
            )));
        }
        Ok(LqsParams {
            eps,
            t_max: c0 * eps.sqrt(),
            a1,
            a_tiny,
            a_small,
        })
    }
}

/// Large-start strategy: estimate the drift from a short uncontrolled
/// prologue, then play the belief-matched feedback law for the rest of the
/// game.
///
/// Prologue: u = 0 until the path leaves the band ((1-eps)q0, (1+eps)q0),
/// capped at t_max. The exit inverts to the estimate
/// abar = log(1 +/- eps)/tau, and the main act plays one of five laws:
/// the Riccati gain at 0 (cap), the constant gain 2 abar (large positive
/// belief), the Riccati gain at abar (bounded positive), zero control
/// (large negative), or the gain kappa(T - tau, abar) frozen at the entry
/// time (bounded negative).
///
/// The near-optimality guarantee applies for starts at or above the
/// configured q_big level; the strategy remains well-defined below it.
/// Negative starts play the mirrored machine.
#[derive(Clone, Copy, Debug)]
pub struct LargeQStrategy {
    params: LqsParams,
}

pub fn large_q_strategy(params: LqsParams) -> LargeQStrategy {
    LargeQStrategy { params }
}

impl Strategy for LargeQStrategy {
    fn label(&self) -> String {
        "lqs".to_string()
    }

    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        if !(horizon > 0.0) {
            return Err(SimError::invalid("lqs: horizon must be positive"));
        }
        if q0 == 0.0 {
            return Err(SimError::invalid(
                "lqs: undefined for start 0 (the prologue band is empty)",
            ));
        }
        if q0 < 0.0 {
            let inner = self.positive_controller(horizon, -q0);
            return Ok(mirror_ctl(inner));
        }
        Ok(self.positive_controller(horizon, q0))
    }
}

impl LargeQStrategy {
    pub fn params(&self) -> LqsParams {
        self.params
    }

    fn positive_controller(&self, horizon: f64, q0: f64) -> Box<dyn Controller> {
        // The cap must leave room for a main act on short continuation
        // horizons.
        let cap = self.params.t_max.min(0.5 * horizon);
        Box::new(LqsCtl {
            params: self.params,
            horizon,
            up: (1.0 + self.params.eps) * q0,
            down: (1.0 - self.params.eps) * q0,
            cap,
            phase: Phase::Prologue,
            events: Vec::new(),
        })
    }
}

enum Phase {
    Prologue,
    Main(Law),
}

/// Feedback law played during the main act: u = -gain(t) q.
enum Law {
    /// u = -kappa(T - t, alpha) q.
    Riccati { alpha: f64 },
    /// u = -g q with g constant (covers zero control as g = 0).
    Constant { gain: f64 },
}

struct LqsCtl {
    params: LqsParams,
    horizon: f64,
    up: f64,
    down: f64,
    cap: f64,
    phase: Phase,
    events: Vec<CrossingRecord>,
}

impl Controller for LqsCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        let (t, q) = (hist.t(), hist.q_now());
        if let Phase::Prologue = self.phase {
            // The cap wins at the first grid point at or beyond it; band
            // exits count only strictly before that point.
            if t >= self.cap {
                self.events
                    .push(CrossingRecord::new("lqs:pro-max:case-i", t, None));
                self.phase = Phase::Main(Law::Riccati { alpha: 0.0 });
            } else if hist.len() > 1 && q >= self.up {
                let abar = (1.0 + self.params.eps).ln() / t;
                let (label, law) = if abar >= self.params.a1 {
                    ("lqs:pro+:case-ii", Law::Constant { gain: 2.0 * abar })
                } else {
                    ("lqs:pro+:case-iii", Law::Riccati { alpha: abar })
                };
                self.events
                    .push(CrossingRecord::new(label, t, Some(self.up)));
                self.phase = Phase::Main(law);
            } else if hist.len() > 1 && q <= self.down {
                let abar = (1.0 - self.params.eps).ln() / t;
                let (label, law) = if abar <= -self.params.a1 {
                    ("lqs:pro-:case-iv", Law::Constant { gain: 0.0 })
                } else {
                    // Bounded negative belief: the gain is kappa of the
                    // remaining time *at entry*, held constant thereafter.
                    let frozen = kappa(self.horizon - t, abar)?;
                    ("lqs:pro-:case-v", Law::Constant { gain: frozen })
                };
                self.events
                    .push(CrossingRecord::new(label, t, Some(self.down)));
                self.phase = Phase::Main(law);
            }
        }
        Ok(match &self.phase {
            Phase::Prologue => 0.0,
            Phase::Main(Law::Riccati { alpha }) => -kappa((self.horizon - t).max(0.0), *alpha)? * q,
            Phase::Main(Law::Constant { gain }) => -gain * q,
        })
    }

    fn drain_events(&mut self) -> Vec<CrossingRecord> {
        std::mem::take(&mut self.events)
    }
}
