use crate::analytics::{kappa, GainFunction};
use crate::error::{SimError, SimResult};
use crate::history::History;
use crate::strategy::{Controller, Strategy};

/// Simple feedback strategy u(t) = -v(t) q(t) for a deterministic gain
/// schedule `v`.
#[derive(Clone, Debug)]
pub struct SimpleFeedback {
    gain: GainFunction,
    label: String,
}

pub fn simple_feedback(gain: GainFunction) -> SimpleFeedback {
    SimpleFeedback {
        gain,
        label: "feedback".to_string(),
    }
}

impl SimpleFeedback {
    pub fn labeled(gain: GainFunction, label: impl Into<String>) -> Self {
        SimpleFeedback {
            gain,
            label: label.into(),
        }
    }
}

impl Strategy for SimpleFeedback {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn start(&self, _horizon: f64, _q0: f64) -> SimResult<Box<dyn Controller>> {
        Ok(Box::new(FeedbackCtl {
            gain: self.gain.clone(),
        }))
    }
}

struct FeedbackCtl {
    gain: GainFunction,
}

impl Controller for FeedbackCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        Ok(-self.gain.eval(hist.t()) * hist.q_now())
    }
}

/// The optimal known-a strategy: feedback with the Riccati gain
/// kappa(horizon - t, alpha). Horizon-generic (the gain schedule is built
/// from the horizon handed to `start`) and independent of the start position.
#[derive(Clone, Copy, Debug)]
pub struct OptimalKnownA {
    alpha: f64,
}

pub fn optimal_known_a(alpha: f64) -> OptimalKnownA {
    OptimalKnownA { alpha }
}

impl OptimalKnownA {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Strategy for OptimalKnownA {
    fn label(&self) -> String {
        format!("opt:{}", self.alpha)
    }

    fn start(&self, horizon: f64, _q0: f64) -> SimResult<Box<dyn Controller>> {
        if !(horizon > 0.0) {
            return Err(SimError::invalid("opt: horizon must be positive"));
        }
        Ok(Box::new(RiccatiCtl {
            horizon,
            alpha: self.alpha,
        }))
    }
}

/// Riccati-gain controller on its own clock; also reused by composites.
pub(crate) struct RiccatiCtl {
    pub horizon: f64,
    pub alpha: f64,
}

impl Controller for RiccatiCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        let remaining = (self.horizon - hist.t()).max(0.0);
        Ok(-kappa(remaining, self.alpha)? * hist.q_now())
    }
}

/// Constant gain strategy CG(alpha): u = -alpha q, independent of horizon
/// and start. CG(0) is the null control.
#[derive(Clone, Copy, Debug)]
pub struct ConstantGain {
    alpha: f64,
}

pub fn constant_gain(alpha: f64) -> SimResult<ConstantGain> {
    if !(alpha >= 0.0) {
        return Err(SimError::invalid(format!(
            "constant gain must be >= 0, got {alpha}"
        )));
    }
    Ok(ConstantGain { alpha })
}

impl ConstantGain {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Strategy for ConstantGain {
    fn label(&self) -> String {
        format!("cg:{}", self.alpha)
    }

    fn start(&self, _horizon: f64, _q0: f64) -> SimResult<Box<dyn Controller>> {
        Ok(Box::new(ConstGainCtl { gain: self.alpha }))
    }
}

pub(crate) struct ConstGainCtl {
    pub gain: f64,
}

impl Controller for ConstGainCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        Ok(-self.gain * hist.q_now())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::kappa;

    fn obs(t: f64, q: f64) -> (Vec<f64>, Vec<f64>) {
        (vec![0.0, t], vec![1.0, q])
    }

    #[test]
    fn zero_gain_is_null_control() {
        let s = simple_feedback(GainFunction::constant(1.0, 0.0));
        let mut c = s.start(1.0, 1.0).unwrap();
        let (ts, qs) = obs(0.3, -4.2);
        assert_eq!(c.control(&History::new(&ts, &qs)).unwrap(), 0.0);
    }

    #[test]
    fn feedback_is_minus_gain_times_position() {
        let s = simple_feedback(GainFunction::constant(1.0, 2.0));
        let mut c = s.start(1.0, 1.0).unwrap();
        let (ts, qs) = obs(0.5, 3.0);
        assert_eq!(c.control(&History::new(&ts, &qs)).unwrap(), -6.0);
    }

    #[test]
    fn optimal_gain_vanishes_at_the_horizon() {
        let s = optimal_known_a(2.5);
        let mut c = s.start(1.0, 1.0).unwrap();
        let (ts, qs) = obs(1.0, 5.0);
        let u = c.control(&History::new(&ts, &qs)).unwrap();
        assert_eq!(u, 0.0, "kappa(0, a) = 0 so the control vanishes at T");
    }

    #[test]
    fn optimal_gain_matches_kappa_of_remaining_time() {
        let s = optimal_known_a(1.0);
        let mut c = s.start(2.0, 1.0).unwrap();
        let (ts, qs) = obs(0.5, 1.0);
        let u = c.control(&History::new(&ts, &qs)).unwrap();
        assert_eq!(u, -kappa(1.5, 1.0).unwrap());
    }

    #[test]
    fn negative_constant_gain_is_rejected() {
        assert!(constant_gain(-1.0).is_err());
    }
}
