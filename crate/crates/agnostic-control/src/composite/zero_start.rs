use std::sync::Arc;

use crate::error::{SimError, SimResult};
use crate::history::History;
use crate::strategy::{Controller, Strategy};
use crate::trajectory::CrossingRecord;

use super::launch::Launched;
use super::mirror_ctl;

/// Zero-start wrapper: from q0 = 0, keep the control off until |q| first
/// reaches `eps`, then play the wrapped strategy (mirrored when the exit is
/// downward) for the full game horizon from there. If the level is never
/// reached the control stays off; the waiting cost is at most T eps^2
/// pathwise (modulo one-step overshoot).
pub struct ZeroStartStrategy {
    inner: Arc<dyn Strategy>,
    eps: f64,
}

pub fn zero_start_strategy(inner: Arc<dyn Strategy>, eps: f64) -> SimResult<ZeroStartStrategy> {
    if !(eps > 0.0) {
        return Err(SimError::invalid("zero-start: eps must be positive"));
    }
    Ok(ZeroStartStrategy { inner, eps })
}

impl Strategy for ZeroStartStrategy {
    fn label(&self) -> String {
        format!("zero-start({})", self.inner.label())
    }

    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        if q0 != 0.0 {
            return Err(SimError::invalid(format!(
                "zero-start: start position must be 0, got {q0}"
            )));
        }
        Ok(Box::new(ZeroStartCtl {
            inner: self.inner.clone(),
            eps: self.eps,
            horizon,
            state: State::Waiting,
            events: Vec::new(),
        }))
    }
}

enum State {
    Waiting,
    Running(Launched),
}

struct ZeroStartCtl {
    inner: Arc<dyn Strategy>,
    eps: f64,
    horizon: f64,
    state: State,
    events: Vec<CrossingRecord>,
}

impl Controller for ZeroStartCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        let (t, q) = (hist.t(), hist.q_now());
        if let State::Waiting = self.state {
            if hist.len() > 1 && q.abs() >= self.eps {
                self.events
                    .push(CrossingRecord::new("zero-start:launch", t, Some(self.eps)));
                let ctl = if q < 0.0 {
                    mirror_ctl(self.inner.start(self.horizon, -q)?)
                } else {
                    self.inner.start(self.horizon, q)?
                };
                self.state = State::Running(Launched::new(ctl, t));
            }
        }
        match &mut self.state {
            State::Waiting => Ok(0.0),
            State::Running(run) => run.step(t, q),
        }
    }

    fn drain_events(&mut self) -> Vec<CrossingRecord> {
        let mut out = std::mem::take(&mut self.events);
        if let State::Running(run) = &mut self.state {
            out.append(&mut run.drain_events());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian::BrownianPath;
    use crate::sim::simulate;
    use crate::strategy::constant_gain;

    #[test]
    fn zero_noise_is_a_fixed_point() {
        // q = 0 is an equilibrium of the uncontrolled dynamics; with no
        // noise, nothing ever happens and the cost is exactly 0.
        let s = zero_start_strategy(Arc::new(constant_gain(1.0).unwrap()), 0.1).unwrap();
        let path = BrownianPath::zeros(1.0, 1e-3).unwrap();
        let tr = simulate(&s, 3.0, 0.0, 1.0, &path).unwrap();
        assert_eq!(tr.cost, 0.0);
        assert!(tr.stops.is_empty());
    }

    #[test]
    fn nonzero_start_is_rejected() {
        let s = zero_start_strategy(Arc::new(constant_gain(1.0).unwrap()), 0.1).unwrap();
        assert!(s.start(1.0, 0.5).is_err());
    }

    #[test]
    fn waiting_cost_is_bounded_by_the_band() {
        // Mean cost before launch <= T eps^2 (plus one-step overshoot).
        let eps = 0.1;
        let s = zero_start_strategy(Arc::new(constant_gain(0.0).unwrap()), eps).unwrap();
        let n_paths = 2000;
        let mut total = 0.0;
        for i in 0..n_paths {
            let path = BrownianPath::generate_stream(1.0, 1e-3, 2024, i).unwrap();
            let tr = simulate(&s, 0.0, 0.0, 1.0, &path).unwrap();
            // Cost accrued before the launch event only.
            let cut = tr.stops.first().map(|e| e.time).unwrap_or(f64::INFINITY);
            let k = tr
                .times
                .iter()
                .position(|&t| t >= cut)
                .unwrap_or(tr.times.len() - 1);
            total += tr.running_cost[k];
        }
        let mean = total / n_paths as f64;
        assert!(
            mean <= 1.05 * eps * eps,
            "mean prologue cost {mean} vs bound {}",
            eps * eps
        );
    }

    #[test]
    fn downward_exit_mirrors_the_inner_strategy() {
        let dt = 1e-4;
        let n = crate::sim::steps_for(1.0, dt);
        let mut incr = vec![0.0; n];
        incr[3] = -0.2; // dive through -eps
        let path = BrownianPath::from_increments(dt, incr).unwrap();
        let s = zero_start_strategy(Arc::new(constant_gain(2.0).unwrap()), 0.1).unwrap();
        let tr = simulate(&s, 0.0, 0.0, 1.0, &path).unwrap();
        assert_eq!(tr.stops[0].label, "zero-start:launch");
        // After launch the control fights the (negative) position upward:
        // u = -2q with q < 0 so u > 0. (CG is odd, mirroring is invisible,
        // which is exactly the point.)
        let k = tr
            .times
            .iter()
            .position(|&t| t >= tr.stops[0].time)
            .unwrap();
        assert!(tr.u[k + 1] > 0.0);
    }
}
