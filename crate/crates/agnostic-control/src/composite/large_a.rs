use std::sync::Arc;

use crate::error::{SimError, SimResult};
use crate::history::History;
use crate::strategy::{Controller, Strategy};
use crate::trajectory::CrossingRecord;

use super::launch::Launched;
use super::mirror_ctl;

/// Parameters of the large-drift strategy.
#[derive(Clone, Copy, Debug)]
pub struct LasParams {
    /// Band half-width of the testing epoch.
    pub eps: f64,
    /// Disaster level: the safety switch fires at |q| = q0_star. Raised to
    /// 2|q0| at start time when the configured level sits below that.
    pub q0_star: f64,
    /// Drift threshold A the near-optimality guarantee is quoted at.
    pub a_threshold: f64,
}

impl LasParams {
    pub fn new(eps: f64, q0_star: f64, a_threshold: f64) -> SimResult<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(SimError::invalid("las: eps must be in (0,1)"));
        }
        if !(q0_star > 0.0) {
            return Err(SimError::invalid("las: q0_star must be positive"));
        }
        Ok(LasParams {
            eps,
            q0_star,
            a_threshold,
        })
    }
}

/// Large-drift strategy, an epoch machine:
///
/// * Testing: control off until the path reaches (1+eps)q0 (inverting to the
///   estimate abar) or falls to -q0_star.
/// * Control: u = -2 abar q; a fall-through entry at -q0_star instead runs
///   the bounded-regret strategy for the whole rest of the game.
/// * Disaster mitigation: if |q| reaches q0_star while controlling, the
///   bounded-regret strategy takes over from there.
///
/// Negative starts play the mirrored machine.
pub struct LargeAStrategy {
    params: LasParams,
    br: Arc<dyn Strategy>,
}

pub fn large_a_strategy(params: LasParams, br: Arc<dyn Strategy>) -> LargeAStrategy {
    LargeAStrategy { params, br }
}

impl Strategy for LargeAStrategy {
    fn label(&self) -> String {
        "las".to_string()
    }

    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        if !(horizon > 0.0) {
            return Err(SimError::invalid("las: horizon must be positive"));
        }
        if q0 < 0.0 {
            let inner = self.positive_controller(horizon, -q0)?;
            return Ok(mirror_ctl(inner));
        }
        self.positive_controller(horizon, q0)
    }
}

impl LargeAStrategy {
    pub fn params(&self) -> LasParams {
        self.params
    }

    fn positive_controller(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        // Honor q0_star >= 2 q0 when launched from a higher position than
        // the level was configured for.
        let q0_star = self.params.q0_star.max(2.0 * q0);
        Ok(Box::new(LasCtl {
            eps: self.params.eps,
            q0_star,
            up: (1.0 + self.params.eps) * q0,
            horizon,
            br: self.br.clone(),
            state: Epoch::Testing,
            events: Vec::new(),
        }))
    }
}

enum Epoch {
    Testing,
    /// u = -2 abar q, watching for the disaster level.
    Control {
        gain: f64,
    },
    /// Bounded-regret child (either the -q0_star fall-through, labeled a
    /// control epoch with tau_D = T, or a true disaster entry).
    Delegated(Launched),
}

struct LasCtl {
    eps: f64,
    q0_star: f64,
    up: f64,
    horizon: f64,
    br: Arc<dyn Strategy>,
    state: Epoch,
    events: Vec<CrossingRecord>,
}

impl LasCtl {
    fn delegate(&mut self, t: f64, q: f64) -> SimResult<Epoch> {
        // The bounded-regret strategy is one fixed for the full game horizon
        // and simply restricted to the remaining time.
        let ctl = self.br.start(self.horizon, q)?;
        Ok(Epoch::Delegated(Launched::new(ctl, t)))
    }
}

impl Controller for LasCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        let (t, q) = (hist.t(), hist.q_now());
        let counted = hist.len() > 1;
        match &mut self.state {
            Epoch::Testing if counted && q >= self.up => {
                let abar = (1.0 + self.eps).ln() / t;
                self.events
                    .push(CrossingRecord::new("las:control", t, Some(self.up)));
                self.state = Epoch::Control { gain: 2.0 * abar };
            }
            Epoch::Testing if counted && q <= -self.q0_star => {
                self.events.push(CrossingRecord::new(
                    "las:control-br",
                    t,
                    Some(-self.q0_star),
                ));
                self.state = self.delegate(t, q)?;
            }
            Epoch::Control { .. } if counted && q.abs() >= self.q0_star => {
                self.events
                    .push(CrossingRecord::new("las:disaster", t, Some(self.q0_star)));
                self.state = self.delegate(t, q)?;
            }
            _ => {}
        }
        match &mut self.state {
            Epoch::Testing => Ok(0.0),
            Epoch::Control { gain } => Ok(-*gain * q),
            Epoch::Delegated(run) => run.step(t, q),
        }
    }

    fn drain_events(&mut self) -> Vec<CrossingRecord> {
        let mut out = std::mem::take(&mut self.events);
        if let Epoch::Delegated(run) = &mut self.state {
            out.append(&mut run.drain_events());
        }
        out.sort_by(|a, b| a.time.total_cmp(&b.time));
        out
    }
}
