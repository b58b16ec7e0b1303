use serde::{Deserialize, Serialize};

use crate::error::{SimError, SimResult};

/// Every tunable in one place: the simulation grid, the Monte Carlo budget,
/// and the constants the composite strategies are parameterized by.
///
/// Serializes to/from TOML (config files) and JSON (run manifests) with the
/// field names below as keys.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Time horizon T (seconds).
    pub horizon: f64,
    /// Starting position q0.
    pub q0: f64,
    /// Integration step. Default 1e-3 * horizon.
    pub dt: f64,
    /// Monte Carlo sample count.
    pub n_paths: usize,
    /// Root seed; path i draws from substream i.
    pub root_seed: u64,
    /// Band half-width for hitting-time drift estimates.
    pub eps: f64,
    /// Smaller band used by the almost-optimal composite. Must be < eps.
    pub eps0: f64,
    /// Agnostic drift bound A.
    pub a_bound: f64,
    /// Belief threshold A1 separating "large" from "bounded" drift guesses.
    pub a1: f64,
    /// Coefficient of the prologue cap t_max = c0 * sqrt(eps).
    pub c0: f64,
    /// Start level above which the large-start strategy's guarantee applies.
    pub q_big: f64,
    /// Safety level for guards and disaster switches.
    pub q0_star: f64,
    /// Lower prologue level of the almost-optimal composite.
    pub q_rare: f64,
    /// Control-bound constant C0 in |u| <= C0 * A^m0 * (|q|+1).
    pub abound_c0: f64,
    /// Control-bound exponent m0.
    pub abound_m0: i32,
    /// Hybrid-regret offset.
    pub gamma: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            horizon: 1.0,
            q0: 1.0,
            dt: 1e-3,
            n_paths: 10_000,
            root_seed: 1812,
            eps: 0.1,
            eps0: 0.05,
            a_bound: 40.0,
            a1: 20.0,
            c0: 0.1,
            q_big: 25.0,
            q0_star: 4.0,
            q_rare: 4.0,
            abound_c0: 3.0,
            abound_m0: 1,
            gamma: 1.0,
        }
    }
}

impl ExperimentConfig {
    /// Default configuration with the position-dependent levels re-derived
    /// for a different starting position: q0_star = max{1, 2|q0|, 4} and
    /// q_rare = 4|q0|, dt = 1e-3 * horizon.
    pub fn for_start(q0: f64) -> Self {
        let mut cfg = ExperimentConfig {
            q0,
            ..ExperimentConfig::default()
        };
        cfg.q0_star = 4.0_f64.max(2.0 * q0.abs()).max(1.0);
        // For a zero start the rare level is measured from the launch band
        // of the zero-start wrapper instead of the position.
        cfg.q_rare = if q0 == 0.0 {
            4.0 * cfg.eps0
        } else {
            4.0 * q0.abs()
        };
        cfg
    }

    pub fn validate(&self) -> SimResult<()> {
        if !(self.horizon > 0.0) {
            return Err(SimError::invalid(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        if !(self.dt > 0.0) {
            return Err(SimError::invalid(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if self.n_paths == 0 {
            return Err(SimError::invalid("n_paths must be at least 1"));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(SimError::invalid(format!(
                "eps must lie in (0,1), got {}",
                self.eps
            )));
        }
        if !(self.eps0 > 0.0 && self.eps0 < self.eps) {
            return Err(SimError::invalid(format!(
                "eps0 must lie in (0, eps), got eps0={} eps={}",
                self.eps0, self.eps
            )));
        }
        if !(self.gamma > 0.0) {
            return Err(SimError::invalid("gamma must be positive"));
        }
        // The guard level must clear both 1 and twice the start; the default
        // max{1, 2|q0|, 4} sits exactly at 2|q0| for |q0| >= 2, so this is
        // checked non-strictly.
        let floor = 1.0_f64.max(2.0 * self.q0.abs());
        if self.q0_star < floor {
            return Err(SimError::invalid(format!(
                "q0_star must be at least max(1, 2|q0|) = {floor}, got {}",
                self.q0_star
            )));
        }
        if !(self.q_rare > 0.0) {
            return Err(SimError::invalid("q_rare must be positive"));
        }
        if !(self.a_bound > 0.0) || !(self.a1 > 0.0) || !(self.c0 > 0.0) {
            return Err(SimError::invalid("a_bound, a1 and c0 must be positive"));
        }
        if self.abound_m0 < 1 {
            return Err(SimError::invalid("abound_m0 must be a positive integer"));
        }
        Ok(())
    }

    /// Number of grid steps covering the horizon.
    pub fn n_steps(&self) -> usize {
        crate::sim::steps_for(self.horizon, self.dt)
    }
}
