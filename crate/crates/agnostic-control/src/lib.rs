//! Simulation laboratory for controlling the scalar linear system
//! dq = (aq + u)dt + dW when the drift parameter `a` is unknown.
//!
//! The crate provides three layers:
//!
//! * **Core simulation** ([`brownian`], [`sim`], [`trajectory`]):
//!   reproducible Brownian paths on counter-based substreams, an
//!   Euler-Maruyama integrator driving an arbitrary [`strategy::Strategy`],
//!   and grid-time crossing detection.
//! * **Oracles and strategies** ([`analytics`], [`strategy`], [`composite`]):
//!   closed-form expected costs (Riccati gain, constant-gain costs,
//!   asymptotics), the primitive feedback policies, combinators
//!   (mirror, rescale, branch, guards), and the composite policies that
//!   estimate the drift from hitting times before committing to a law.
//! * **Experiments** ([`experiments`], [`claims`], [`cli`]): paired-noise
//!   Monte Carlo cost estimation, additive/multiplicative/hybrid regret
//!   curves, hitting-time frequency studies, and a registry of scripted
//!   checks with pinned tolerances.
//!
//! The `examples/` directory holds one runnable example per capability; the
//! thin `agctl` binary exposes the same operations as subcommands.

pub mod analytics;
pub mod brownian;
pub mod claims;
pub mod cli;
pub mod composite;
pub mod config;
pub mod error;
pub mod experiments;
pub mod history;
pub mod sim;
pub mod stats;
pub mod strategy;
pub mod trajectory;

pub use brownian::BrownianPath;
pub use config::ExperimentConfig;
pub use error::{SimError, SimResult};
pub use history::{Direction, History};
pub use sim::simulate;
pub use trajectory::{CrossingRecord, Trajectory};
