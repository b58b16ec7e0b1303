use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{SimError, SimResult};
use crate::sim::steps_for;

/// A realized Brownian increment sequence on a uniform grid.
///
/// Increments are N(0, dt), so partial sums satisfy E[W(t)^2] = t.
/// Regenerating with the same `(seed, stream)` yields bit-identical
/// increments; per-path substreams make parallel and serial Monte Carlo
/// runs agree exactly.
#[derive(Clone, Debug)]
pub struct BrownianPath {
    dt: f64,
    increments: Vec<f64>,
    seed: u64,
    stream: u64,
}

impl BrownianPath {
    /// Generate `ceil(horizon/dt)` increments from substream 0 of `seed`.
    pub fn generate(horizon: f64, dt: f64, seed: u64) -> SimResult<Self> {
        Self::generate_stream(horizon, dt, seed, 0)
    }

    /// Generate from the given substream. `stream` is typically the path
    /// index of a Monte Carlo run rooted at `seed`.
    pub fn generate_stream(horizon: f64, dt: f64, seed: u64, stream: u64) -> SimResult<Self> {
        if !(horizon > 0.0) {
            return Err(SimError::invalid(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if !(dt > 0.0) {
            return Err(SimError::invalid(format!("dt must be positive, got {dt}")));
        }
        let n = steps_for(horizon, dt);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let scale = dt.sqrt();
        let increments = (0..n)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                scale * z
            })
            .collect();
        Ok(BrownianPath {
            dt,
            increments,
            seed,
            stream,
        })
    }

    /// A path with all increments zero; turns the simulator into a plain
    /// deterministic ODE integrator.
    pub fn zeros(horizon: f64, dt: f64) -> SimResult<Self> {
        if !(horizon > 0.0) || !(dt > 0.0) {
            return Err(SimError::invalid("horizon and dt must be positive"));
        }
        let n = steps_for(horizon, dt);
        Ok(BrownianPath {
            dt,
            increments: vec![0.0; n],
            seed: 0,
            stream: 0,
        })
    }

    /// Wrap explicit increments (used to replay path suffixes).
    pub fn from_increments(dt: f64, increments: Vec<f64>) -> SimResult<Self> {
        if !(dt > 0.0) {
            return Err(SimError::invalid("dt must be positive"));
        }
        Ok(BrownianPath {
            dt,
            increments,
            seed: 0,
            stream: 0,
        })
    }

    /// Negated copy: drives the mirrored system.
    pub fn negated(&self) -> Self {
        BrownianPath {
            dt: self.dt,
            increments: self.increments.iter().map(|w| -w).collect(),
            seed: self.seed,
            stream: self.stream,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Whether the stored increments span at least `horizon`.
    pub fn covers(&self, horizon: f64) -> bool {
        self.increments.len() >= steps_for(horizon, self.dt)
    }

    /// Partial sum W(t_k) for k = 0..=len.
    pub fn partial_sums(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.increments.len() + 1);
        let mut acc = 0.0;
        w.push(0.0);
        for dw in &self.increments {
            acc += dw;
            w.push(acc);
        }
        w
    }
}
