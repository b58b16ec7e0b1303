use std::sync::Arc;

use crate::error::{SimError, SimResult};
use crate::history::{Direction, History, LocalHistory};
use crate::strategy::{Controller, Strategy};
use crate::trajectory::CrossingRecord;

// ---------------------------------------------------------------------------
// mirror
// ---------------------------------------------------------------------------

/// Sign-flipped copy of a strategy: started from -q0 it feeds its inner
/// controller the negated path and negates the control back, so
/// J(mirror(s), a; T, -q0) = J(s, a; T, q0) pathwise under negated noise.
pub struct Mirror {
    inner: Arc<dyn Strategy>,
}

pub fn mirror(inner: Arc<dyn Strategy>) -> Mirror {
    Mirror { inner }
}

impl Strategy for Mirror {
    fn label(&self) -> String {
        format!("mirror({})", self.inner.label())
    }

    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        Ok(Box::new(MirrorCtl::new(self.inner.start(horizon, -q0)?)))
    }
}

pub(crate) struct MirrorCtl {
    inner: Box<dyn Controller>,
    local: LocalHistory,
}

impl MirrorCtl {
    pub(crate) fn new(inner: Box<dyn Controller>) -> Self {
        MirrorCtl {
            inner,
            local: LocalHistory::new(),
        }
    }
}

impl Controller for MirrorCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        self.local.push(hist.t(), -hist.q_now());
        Ok(-self.inner.control(&self.local.view())?)
    }

    fn drain_events(&mut self) -> Vec<CrossingRecord> {
        self.inner
            .drain_events()
            .into_iter()
            .map(|mut e| {
                e.level = e.level.map(|l| -l);
                e
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// rescale
// ---------------------------------------------------------------------------

/// Diffusive rescaling: from a strategy for horizon T and start q0, the
/// rescaled strategy plays horizon lambda^2 T from start lambda q0, feeding
/// the inner controller the shrunk path (t/lambda^2, q/lambda) and scaling
/// the control by 1/lambda. lambda = 1 reproduces the original behavior.
pub struct Rescale {
    inner: Arc<dyn Strategy>,
    lambda: f64,
}

pub fn rescale(inner: Arc<dyn Strategy>, lambda: f64) -> SimResult<Rescale> {
    if !(lambda > 0.0) {
        return Err(SimError::invalid(format!(
            "rescale factor must be positive, got {lambda}"
        )));
    }
    Ok(Rescale { inner, lambda })
}

impl Strategy for Rescale {
    fn label(&self) -> String {
        format!("rescale({},{})", self.inner.label(), self.lambda)
    }

    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        let l2 = self.lambda * self.lambda;
        Ok(Box::new(RescaleCtl {
            inner: self.inner.start(horizon / l2, q0 / self.lambda)?,
            lambda: self.lambda,
            local: LocalHistory::new(),
        }))
    }
}

struct RescaleCtl {
    inner: Box<dyn Controller>,
    lambda: f64,
    local: LocalHistory,
}

impl Controller for RescaleCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        let l2 = self.lambda * self.lambda;
        self.local.push(hist.t() / l2, hist.q_now() / self.lambda);
        Ok(self.inner.control(&self.local.view())? / self.lambda)
    }

    fn drain_events(&mut self) -> Vec<CrossingRecord> {
        let l2 = self.lambda * self.lambda;
        self.inner
            .drain_events()
            .into_iter()
            .map(|mut e| {
                e.time *= l2;
                e.level = e.level.map(|l| l * self.lambda);
                e
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// branch
// ---------------------------------------------------------------------------

/// A level trigger within a stopping rule.
#[derive(Clone, Debug)]
pub struct LevelTrigger {
    pub label: String,
    pub level: f64,
    pub direction: Direction,
}

/// History-measurable stopping rule: the first level trigger to fire, or a
/// time cap. At the grid point where the cap is first reached the cap wins.
#[derive(Clone, Debug, Default)]
pub struct StopRule {
    pub levels: Vec<LevelTrigger>,
    pub time_cap: Option<f64>,
}

impl StopRule {
    pub fn at_level(label: impl Into<String>, level: f64, direction: Direction) -> Self {
        StopRule {
            levels: vec![LevelTrigger {
                label: label.into(),
                level,
                direction,
            }],
            time_cap: None,
        }
    }

    pub fn abs_level(level: f64) -> Self {
        Self::at_level("abs", level, Direction::Absolute)
    }

    pub fn and_level(mut self, label: impl Into<String>, level: f64, direction: Direction) -> Self {
        self.levels.push(LevelTrigger {
            label: label.into(),
            level,
            direction,
        });
        self
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.time_cap = Some(cap);
        self
    }

    /// Evaluate at the current observation (never fires on the start point).
    fn fires(&self, t: f64, q: f64, is_start: bool) -> Option<String> {
        if let Some(cap) = self.time_cap {
            if t >= cap {
                return Some("cap".to_string());
            }
        }
        if is_start {
            return None;
        }
        for trig in &self.levels {
            let hit = match trig.direction {
                Direction::Up => q >= trig.level,
                Direction::Down => q <= trig.level,
                Direction::Absolute => q.abs() >= trig.level,
            };
            if hit {
                return Some(trig.label.clone());
            }
        }
        None
    }

    fn level_of(&self, label: &str) -> Option<f64> {
        self.levels
            .iter()
            .find(|t| t.label == label)
            .map(|t| t.level)
    }
}

/// Everything a branch chooser gets to see at the switch point.
pub struct BranchPoint<'a> {
    /// Stopping time (grid-snapped, in the branch's own clock).
    pub time: f64,
    /// Position at the stopping time (may overshoot the level by one step).
    pub position: f64,
    /// Label of the trigger that fired ("cap" for the time cap).
    pub trigger: String,
    /// Time left until this branch's own horizon.
    pub remaining: f64,
    /// Observed history up to and including the switch point.
    pub history: &'a History<'a>,
}

/// A continuation: a strategy together with the horizon it is initialized
/// for, which must cover the remaining game (it may be longer; play simply
/// stops at the outer horizon).
pub struct Continuation {
    pub strategy: Arc<dyn Strategy>,
    pub horizon: f64,
}

pub type Chooser = dyn Fn(&BranchPoint<'_>) -> Continuation + Send + Sync;

/// Branching strategy: play `base` until the stopping rule fires, then
/// forget the past and play the chosen continuation from the switch point
/// as if the game started there.
pub struct Branch {
    base: Arc<dyn Strategy>,
    /// Extra horizon the base strategy is initialized with beyond the game
    /// horizon (a strategy for a longer horizon restricted to the game).
    base_horizon_extra: f64,
    stop: StopRule,
    chooser: Arc<Chooser>,
    label: String,
}

pub fn branch(
    base: Arc<dyn Strategy>,
    stop: StopRule,
    chooser: impl Fn(&BranchPoint<'_>) -> Continuation + Send + Sync + 'static,
) -> Branch {
    let label = format!("branch({})", base.label());
    Branch {
        base,
        base_horizon_extra: 0.0,
        stop,
        chooser: Arc::new(chooser),
        label,
    }
}

impl Branch {
    pub fn with_base_horizon_extra(mut self, extra: f64) -> Self {
        self.base_horizon_extra = extra;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

impl Strategy for Branch {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        Ok(Box::new(BranchCtl {
            base: self.base.start(horizon + self.base_horizon_extra, q0)?,
            stop: self.stop.clone(),
            chooser: self.chooser.clone(),
            horizon,
            label: self.label.clone(),
            state: BranchState::Base,
            events: Vec::new(),
        }))
    }
}

enum BranchState {
    Base,
    Continued {
        ctl: Box<dyn Controller>,
        entry_time: f64,
        local: LocalHistory,
    },
}

struct BranchCtl {
    base: Box<dyn Controller>,
    stop: StopRule,
    chooser: Arc<Chooser>,
    horizon: f64,
    label: String,
    state: BranchState,
    events: Vec<CrossingRecord>,
}

impl Controller for BranchCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        let (t, q) = (hist.t(), hist.q_now());
        if let BranchState::Base = self.state {
            if let Some(trigger) = self.stop.fires(t, q, hist.len() == 1) {
                let remaining = self.horizon - t;
                let bp = BranchPoint {
                    time: t,
                    position: q,
                    trigger: trigger.clone(),
                    remaining,
                    history: hist,
                };
                let cont = (self.chooser)(&bp);
                if cont.horizon < remaining - 1e-9 {
                    return Err(SimError::ContractViolation {
                        time: t,
                        detail: format!(
                            "{}: continuation horizon {} < remaining {}",
                            self.label, cont.horizon, remaining
                        ),
                    });
                }
                self.events.push(CrossingRecord::new(
                    format!("{}:{}", self.label, trigger),
                    t,
                    self.stop.level_of(&trigger),
                ));
                let ctl = cont.strategy.start(cont.horizon, q)?;
                self.state = BranchState::Continued {
                    ctl,
                    entry_time: t,
                    local: LocalHistory::new(),
                };
            }
        }
        match &mut self.state {
            BranchState::Base => self.base.control(hist),
            BranchState::Continued {
                ctl,
                entry_time,
                local,
            } => {
                local.push(t - *entry_time, q);
                ctl.control(&local.view())
            }
        }
    }

    fn drain_events(&mut self) -> Vec<CrossingRecord> {
        let mut out = self.base.drain_events();
        out.append(&mut self.events);
        if let BranchState::Continued {
            ctl, entry_time, ..
        } = &mut self.state
        {
            for mut e in ctl.drain_events() {
                e.time += *entry_time;
                out.push(e);
            }
        }
        out.sort_by(|a, b| a.time.total_cmp(&b.time));
        out
    }
}

// ---------------------------------------------------------------------------
// A-boundedness guard
// ---------------------------------------------------------------------------

/// Wrapper asserting |u| <= c0 * A^{m0} (|q| + 1) at every step; controls
/// pass through unchanged and the first violation aborts the path with a
/// contract error naming the time and offending control.
pub struct ABounded {
    inner: Arc<dyn Strategy>,
    bound: f64,
}

pub fn assert_a_bounded(
    inner: Arc<dyn Strategy>,
    a_bound: f64,
    c0: f64,
    m0: i32,
) -> SimResult<ABounded> {
    if !(a_bound > 0.0) {
        return Err(SimError::invalid("A-bound must be positive"));
    }
    Ok(ABounded {
        inner,
        bound: c0 * a_bound.powi(m0),
    })
}

impl Strategy for ABounded {
    fn label(&self) -> String {
        format!("a-bounded({})", self.inner.label())
    }

    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        Ok(Box::new(ABoundedCtl {
            inner: self.inner.start(horizon, q0)?,
            bound: self.bound,
        }))
    }
}

struct ABoundedCtl {
    inner: Box<dyn Controller>,
    bound: f64,
}

impl Controller for ABoundedCtl {
    fn control(&mut self, hist: &History<'_>) -> SimResult<f64> {
        let u = self.inner.control(hist)?;
        let cap = self.bound * (hist.q_now().abs() + 1.0);
        if u.abs() > cap {
            return Err(SimError::ContractViolation {
                time: hist.t(),
                detail: format!(
                    "|u| = {} exceeds A-bound {} at q = {}",
                    u.abs(),
                    cap,
                    hist.q_now()
                ),
            });
        }
        Ok(u)
    }

    fn drain_events(&mut self) -> Vec<CrossingRecord> {
        self.inner.drain_events()
    }
}

// ---------------------------------------------------------------------------
// guard_with_lqs
// ---------------------------------------------------------------------------

/// Builds continuations for a safety switch: given (horizon, entry position)
/// returns the large-start strategy to play from there.
pub type LqsFactory = Arc<dyn Fn(f64, f64) -> Arc<dyn Strategy> + Send + Sync>;

/// Strengthened strategy: play `base` until the first |q| = q0_star, then
/// hand over to the large-start strategy for the remaining horizon (plus
/// `horizon_extra`, when the composite asks for the longer horizon).
pub struct GuardedStrategy {
    inner: Branch,
}

pub fn guard_with_lqs(
    base: Arc<dyn Strategy>,
    q0_star: f64,
    lqs_factory: LqsFactory,
) -> SimResult<GuardedStrategy> {
    guard_with_lqs_extra(base, q0_star, lqs_factory, 0.0)
}

/// Variant initializing both the base and the continuation with
/// `horizon_extra` more time than the game, as the strengthened composite
/// requires.
pub fn guard_with_lqs_extra(
    base: Arc<dyn Strategy>,
    q0_star: f64,
    lqs_factory: LqsFactory,
    horizon_extra: f64,
) -> SimResult<GuardedStrategy> {
    if !(q0_star > 0.0) {
        return Err(SimError::invalid("guard level must be positive"));
    }
    let label = format!("guard({},{q0_star})", base.label());
    let inner = branch(
        base,
        StopRule::abs_level(q0_star),
        move |bp: &BranchPoint<'_>| {
            let horizon = bp.remaining + horizon_extra;
            Continuation {
                strategy: lqs_factory(horizon, bp.position),
                horizon,
            }
        },
    )
    .with_base_horizon_extra(horizon_extra)
    .with_label(label);
    Ok(GuardedStrategy { inner })
}

impl Strategy for GuardedStrategy {
    fn label(&self) -> String {
        self.inner.label()
    }

    fn start(&self, horizon: f64, q0: f64) -> SimResult<Box<dyn Controller>> {
        if q0.abs() >= self.guard_level() {
            return Err(SimError::invalid(format!(
                "guard level {} must exceed |start| {}",
                self.guard_level(),
                q0.abs()
            )));
        }
        self.inner.start(horizon, q0)
    }
}

impl GuardedStrategy {
    fn guard_level(&self) -> f64 {
        self.inner.stop.levels[0].level
    }
}
