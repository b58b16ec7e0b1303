use std::sync::Arc;

use crate::error::{SimError, SimResult};
use crate::history::History;
use crate::strategy::{guard_with_lqs_extra, rescale, Controller, LqsFactory, Strategy};
use crate::trajectory::CrossingRecord;

use super::launch::Launched;
use super::mirror_ctl;

/// Parameters of the almost-optimal composite.
#[derive(Clone, Copy, Debug)]
pub struct SigmaStarParams {
    /// Outer tolerance (drives the guard and rescale budget).
    pub eps: f64,
    /// Prologue band half-width; also the rescale factor is 1 + eps0.
    pub eps0: f64,
    /// Agnostic drift bound A; the main act believes "large" above A/10.
    pub a_bound: f64,
    /// Lower prologue level (a rare event for any drift).
    pub q_rare: f64,
    /// Guard level used when strengthening the base strategy.
    pub q0_star: f64,
}

impl SigmaStarParams {
    pub fn new(eps: f64, eps0: f64, a_bound: f64, q_rare: f64, q0_star: f64) -> SimResult<Self> {
        if !(eps0 > 0.0 && eps0 < eps) {
            return Err(SimError::invalid(format!(
                "sigma-star: need 0 < eps0 < eps, got eps0={eps0} eps={eps}"
            )));
        }
        if !(a_bound > 0.0 && q_rare > 0.0 && q0_star > 0.0) {
            return Err(SimError::invalid(
                "sigma-star: a_bound, q_rare and q0_star must be positive",
            ));
        }
        Ok(SigmaStarParams {
            eps,
            eps0,
            a_bound,
            q_rare,
            q0_star,
        })
    }
}

/// The almost-optimal agnostic strategy built over a given A-bounded base:
///
/// * Prologue: control off until the path reaches (1+eps0)q0 (up) or
///   -q_rare (down), or the game ends.
/// * Up exit: abar = log(1+eps0)/tau. If abar >= A/10 the large-drift
///   strategy plays the rest; otherwise the strengthened-and-rescaled copy
///   of the base does.
/// * Down exit: the bounded-regret strategy bounds the losses.
///
/// The strengthened copy guards the base at |q| = q0_star with a
/// large-start continuation (initialized with eps0 extra horizon), then the
/// whole thing is rescaled by 1 + eps0 so it starts from (1+eps0)q0.
pub struct AlmostOptimalStrategy {
    params: SigmaStarParams,
    sbar: Arc<dyn Strategy>,
    las: Arc<dyn Strategy>,
    br: Arc<dyn Strategy>,
    base_label: String,
}

/// `base` must already carry its A-boundedness wrapper; violations surface
/// as contract errors from the inner controller.
pub fn almost_optimal_strategy(
    base: Arc<dyn Strategy>,
    params: SigmaStarParams,
    las: Arc<dyn Strategy>,
    br: Arc<dyn Strategy>,
    lqs_factory: LqsFactory,
) -> SimResult<AlmostOptimalStrategy> {
    let base_label = base.label();
    // Strengthen first (guard at q0_star with the longer-horizon
    // continuation), then rescale by 1 + eps0.
    let guarded = guard_with_lqs_extra(base, params.q0_star, lqs_factory, params.eps0)?;
    let sbar = rescale(Arc::new(guarded), 1.0 + params.eps0)?;
    Ok(AlmostOptimalStrategy {
        params,
        sbar: Arc::new(sbar),
        las,
        br,
        base_label,
    })
}

impl Strategy for AlmostOptimalStrategy {
    fn label(&self) -> String {
        format!("sigma-star({})", self.base_label)
    }

    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        if !(horizon > 0.0) {
            return Err(SimError::invalid("sigma-star: horizon must be positive"));
        }
        if q0 == 0.0 {
            return Err(SimError::invalid(
                "sigma-star: undefined for start 0 (use the zero-start wrapper)",
            ));
        }
        if q0 < 0.0 {
            let inner = self.positive_controller(horizon, -q0);
            return Ok(mirror_ctl(inner));
        }
        Ok(self.positive_controller(horizon, q0))
    }
}

impl AlmostOptimalStrategy {
    pub fn params(&self) -> SigmaStarParams {
        self.params
    }

    fn positive_controller(&self, horizon: f64, q0: f64) -> Box<dyn Controller> {
        Box::new(SigmaStarCtl {
            params: self.params,
            up: (1.0 + self.params.eps0) * q0,
            horizon,
            sbar: self.sbar.clone(),
            las: self.las.clone(),
            br: self.br.clone(),
            state: State::Prologue,
            events: Vec::new(),
        })
    }
}

enum State {
    Prologue,
    Main(Launched),
}

struct SigmaStarCtl {
    params: SigmaStarParams,
    up: f64,
    horizon: f64,
    sbar: Arc<dyn Strategy>,
    las: Arc<dyn Strategy>,
    br: Arc<dyn Strategy>,
    state: State,
    events: Vec<CrossingRecord>,
}

impl Controller for SigmaStarCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        let (t, q) = (hist.t(), hist.q_now());
        if let State::Prologue = self.state {
            if hist.len() > 1 && q >= self.up {
                let abar = (1.0 + self.params.eps0).ln() / t;
                let (label, strategy, child_horizon) = if abar >= self.params.a_bound / 10.0 {
                    // The large-drift strategy is fixed for the full game
                    // horizon and restricted to the remaining time.
                    ("sigma-star:las", self.las.clone(), self.horizon)
                } else {
                    // The rescaled strengthened copy natively lives on the
                    // stretched horizon (1+eps0)^2 T; playing it to T is the
                    // usual restriction.
                    let l = 1.0 + self.params.eps0;
                    ("sigma-star:sbar", self.sbar.clone(), l * l * self.horizon)
                };
                self.events
                    .push(CrossingRecord::new(label, t, Some(self.up)));
                let ctl = strategy.start(child_horizon, q)?;
                self.state = State::Main(Launched::new(ctl, t));
            } else if hist.len() > 1 && q <= -self.params.q_rare {
                self.events.push(CrossingRecord::new(
                    "sigma-star:br",
                    t,
                    Some(-self.params.q_rare),
                ));
                let ctl = self.br.start(self.horizon, q)?;
                self.state = State::Main(Launched::new(ctl, t));
            }
        }
        match &mut self.state {
            State::Prologue => Ok(0.0),
            State::Main(run) => run.step(t, q),
        }
    }

    fn drain_events(&mut self) -> Vec<CrossingRecord> {
        let mut out = std::mem::take(&mut self.events);
        if let State::Main(run) = &mut self.state {
            out.append(&mut run.drain_events());
        }
        out.sort_by(|a, b| a.time.total_cmp(&b.time));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian::BrownianPath;
    use crate::composite::toolkit;
    use crate::config::ExperimentConfig;
    use crate::sim::simulate;
    use crate::strategy::{assert_a_bounded, optimal_known_a};

    fn sigma_star(cfg: &ExperimentConfig) -> AlmostOptimalStrategy {
        let base = assert_a_bounded(
            Arc::new(optimal_known_a(1.0)),
            cfg.a_bound,
            cfg.abound_c0,
            cfg.abound_m0,
        )
        .unwrap();
        toolkit::sigma_star_from_config(Arc::new(base), cfg).unwrap()
    }

    #[test]
    fn no_noise_zero_drift_stays_in_prologue() {
        let cfg = ExperimentConfig::default();
        let s = sigma_star(&cfg);
        let path = BrownianPath::zeros(1.0, 1e-3).unwrap();
        let tr = simulate(&s, 0.0, 1.0, 1.0, &path).unwrap();
        assert!(tr.stops.is_empty(), "{:?}", tr.stops);
        assert!(tr.u.iter().all(|&u| u == 0.0));
        // Cost of holding still at q0 = 1 for T = 1.
        assert!((tr.cost - 1.0).abs() < 1e-9);
    }

    #[test]
    fn no_noise_moderate_drift_takes_the_sbar_branch() {
        let cfg = ExperimentConfig::default();
        let s = sigma_star(&cfg);
        let path = BrownianPath::zeros(1.0, 1e-5).unwrap();
        let tr = simulate(&s, 2.0, 1.0, 1.0, &path).unwrap();
        let entry = &tr.stops[0];
        assert_eq!(entry.label, "sigma-star:sbar");
        let expected = (1.0f64 + cfg.eps0).ln() / 2.0;
        assert!(
            (entry.time - expected).abs() <= 1e-5 + 1e-12,
            "tau1 {} vs {}",
            entry.time,
            expected
        );
        // abar = 2 < A/10 = 4.
        assert!(tr.cost.is_finite());
    }

    #[test]
    fn no_noise_huge_drift_takes_the_las_branch() {
        let cfg = ExperimentConfig::default();
        let s = sigma_star(&cfg);
        let path = BrownianPath::zeros(1.0, 1e-5).unwrap();
        let tr = simulate(&s, 60.0, 1.0, 1.0, &path).unwrap();
        assert_eq!(tr.stops[0].label, "sigma-star:las");
        assert!(tr.cost.is_finite());
    }

    #[test]
    fn rare_dive_takes_the_bounded_regret_branch() {
        let cfg = ExperimentConfig::default();
        let s = sigma_star(&cfg);
        let dt = 1e-4;
        let n = crate::sim::steps_for(1.0, dt);
        let mut incr = vec![0.0; n];
        incr[5] = -(cfg.q_rare + 1.5);
        let path = BrownianPath::from_increments(dt, incr).unwrap();
        let tr = simulate(&s, 0.0, 1.0, 1.0, &path).unwrap();
        assert_eq!(tr.stops[0].label, "sigma-star:br");
    }

    #[test]
    fn branch_choice_is_history_measurable() {
        // Two noise paths identical up to the prologue exit take the same
        // branch at the same time.
        let cfg = ExperimentConfig::default();
        let s = sigma_star(&cfg);
        let base = BrownianPath::generate(1.0, 1e-3, 314).unwrap();
        let tr = simulate(&s, 1.0, 1.0, 1.0, &base).unwrap();
        let tau1 = tr.stops.first().map(|e| e.time).unwrap_or(1.0);
        let k_tau = (tau1 / 1e-3).round() as usize;
        let mut other_incr = base.increments().to_vec();
        for w in other_incr.iter_mut().skip(k_tau + 1) {
            *w = -*w; // diverge strictly after the branch decision
        }
        let other = BrownianPath::from_increments(1e-3, other_incr).unwrap();
        let tr2 = simulate(&s, 1.0, 1.0, 1.0, &other).unwrap();
        assert_eq!(
            tr.stops.first().map(|e| (e.label.clone(), e.time)),
            tr2.stops.first().map(|e| (e.label.clone(), e.time))
        );
    }

    #[test]
    fn a_bound_violations_propagate() {
        // A base whose control breaks its declared bound must surface a
        // contract violation through the composite.
        let cfg = ExperimentConfig::default();
        let base = assert_a_bounded(
            Arc::new(crate::strategy::constant_gain(50.0).unwrap()),
            1.0, // declared A much too small for CG(50)
            1.0,
            1,
        )
        .unwrap();
        let s = toolkit::sigma_star_from_config(Arc::new(base), &cfg).unwrap();
        let path = BrownianPath::zeros(1.0, 1e-4).unwrap();
        // Drift 2 exits the prologue upward, lands in the sbar branch, and
        // the base immediately violates |u| <= 1*(|q|+1).
        let err = simulate(&s, 2.0, 1.0, 1.0, &path).unwrap_err();
        assert!(matches!(err, SimError::ContractViolation { .. }), "{err}");
    }
}
