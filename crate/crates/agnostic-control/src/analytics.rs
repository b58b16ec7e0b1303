//! Closed-form and quadrature-based expected-cost oracles for the scalar
//! system dq = (aq + u)dt + dW under quadratic cost.

use std::sync::Arc;

use crate::error::{SimError, SimResult};

/// Optimal feedback gain for remaining time `s` and drift parameter `alpha`:
///
/// ```text
/// kappa(s, a) = tanh(s r) / (r - a tanh(s r)),   r = sqrt(a^2 + 1)
/// ```
///
/// Evaluated in a cancellation-free form so it stays accurate for large
/// positive `alpha` (where r - a is tiny) and saturates cleanly once
/// tanh reaches 1 in double precision.
pub fn kappa(s: f64, alpha: f64) -> SimResult<f64> {
    if !(s >= 0.0) {
        return Err(SimError::invalid(format!("kappa: s must be >= 0, got {s}")));
    }
    let r = r_of(alpha);
    let x = s * r;
    // theta = tanh(x), one_minus_theta computed without cancellation.
    let e2 = (-2.0 * x).exp();
    let theta = (1.0 - e2) / (1.0 + e2);
    let one_minus_theta = 2.0 * e2 / (1.0 + e2);
    // Denominator r - alpha*theta = r(1-theta) + theta(r - alpha); the factor
    // r - alpha is computed stably on both signs of alpha.
    let denom = r * one_minus_theta + theta * r_minus(alpha, r);
    Ok(theta / denom)
}

fn r_of(alpha: f64) -> f64 {
    (alpha * alpha + 1.0).sqrt()
}

/// r - alpha without cancellation (equals 1/(r + alpha) for alpha > 0).
fn r_minus(alpha: f64, r: f64) -> f64 {
    if alpha > 0.0 {
        1.0 / (r + alpha)
    } else {
        r - alpha
    }
}

/// r + alpha without cancellation (equals 1/(r - alpha) for alpha < 0).
fn r_plus(alpha: f64, r: f64) -> f64 {
    if alpha < 0.0 {
        1.0 / (r - alpha)
    } else {
        r + alpha
    }
}

/// Time integral K(t, alpha) of the gain kappa(., alpha) over [0, t],
/// in closed form:
///
/// ```text
/// K = (a + r) t + log((r - a) / 2r) + log(1 + e^{-2tr} (r + a)/(r - a))
/// ```
///
/// Rearranged in the log domain so nothing overflows for large |alpha| t.
pub fn k_integral(t: f64, alpha: f64) -> SimResult<f64> {
    if !(t >= 0.0) {
        return Err(SimError::invalid(format!(
            "k_integral: t must be >= 0, got {t}"
        )));
    }
    let r = r_of(alpha);
    let rpa = r_plus(alpha, r);
    // (r+a)/(r-a) = (r+a)^2 since r^2 - a^2 = 1.
    let tail = 2.0 * rpa.ln() - 2.0 * t * r;
    Ok((alpha + r) * t - (2.0 * r).ln() - rpa.ln() + softplus(tail))
}

/// ln(1 + e^x) without overflow.
fn softplus(x: f64) -> f64 {
    if x > 35.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Optimal expected cost for known drift: J0(a; T, q0) = kappa(T,a) q0^2 + K(T,a).
pub fn j0(a: f64, horizon: f64, q0: f64) -> SimResult<f64> {
    if !(horizon > 0.0) {
        return Err(SimError::invalid(format!(
            "j0: horizon must be positive, got {horizon}"
        )));
    }
    Ok(kappa(horizon, a)? * q0 * q0 + k_integral(horizon, a)?)
}

/// Large-|a| approximation of J0: 2a(q0^2 + T) for a > 0 and
/// (q0^2 + T)/(2|a|) for a < 0. Undefined at a = 0.
pub fn j0_asymptote(a: f64, horizon: f64, q0: f64) -> SimResult<f64> {
    if a == 0.0 {
        return Err(SimError::invalid("j0_asymptote: no asymptote at a = 0"));
    }
    let m = q0 * q0 + horizon;
    Ok(if a > 0.0 {
        2.0 * a * m
    } else {
        m / (2.0 * a.abs())
    })
}

/// Expected cost of the constant-gain strategy u = -alpha q:
///
/// ```text
/// J(CG(alpha), a) = (1 + alpha^2) [ g(x) + f(x) q0^2 ],   x = a - alpha,
/// f(x) = (e^{2Tx} - 1) / 2x,   g(x) = (f(x) - T) / 2x,
/// ```
///
/// with a series expansion through the removable singularity at x = 0.
/// Overflows to +inf gracefully for extreme positive x T.
pub fn cg_cost(alpha: f64, a: f64, horizon: f64, q0: f64) -> SimResult<f64> {
    if !(alpha >= 0.0) {
        return Err(SimError::invalid(format!(
            "cg_cost: gain must be >= 0, got {alpha}"
        )));
    }
    if !(horizon > 0.0) {
        return Err(SimError::invalid("cg_cost: horizon must be positive"));
    }
    let t = horizon;
    let x = a - alpha;
    let (f, g) = if (x * t).abs() < 1e-6 {
        let tx = t * x;
        // f = (e^{2Tx}-1)/2x = T (1 + Tx + (2/3)(Tx)^2 + ...)
        let f = t * (1.0 + tx + (2.0 / 3.0) * tx * tx);
        // g = (f - T)/2x = T^2/2 + T^3 x/3 + T^4 x^2/6 + ...
        let g = t * t / 2.0 + t * t * t * x / 3.0 + t * t * t * t * x * x / 6.0;
        (f, g)
    } else {
        let f = (2.0 * t * x).exp_m1() / (2.0 * x);
        let g = (f - t) / (2.0 * x);
        (f, g)
    };
    Ok((1.0 + alpha * alpha) * (g + f * q0 * q0))
}

/// Variance of X_t = e^{-at} q(t) - q0 for the uncontrolled system:
/// (1 - e^{-2at}) / 2a, equal to t at a = 0.
pub fn xt_variance(a: f64, t: f64) -> f64 {
    debug_assert!(t >= 0.0);
    if a == 0.0 {
        t
    } else {
        -(-2.0 * a * t).exp_m1() / (2.0 * a)
    }
}

/// A deterministic gain schedule v(t) on [0, horizon].
#[derive(Clone)]
pub struct GainFunction {
    horizon: f64,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl GainFunction {
    pub fn new(horizon: f64, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        GainFunction {
            horizon,
            f: Arc::new(f),
        }
    }

    /// Constant gain v = alpha.
    pub fn constant(horizon: f64, alpha: f64) -> Self {
        Self::new(horizon, move |_| alpha)
    }

    /// The optimal known-a schedule t -> kappa(horizon - t, alpha).
    pub fn riccati(horizon: f64, alpha: f64) -> Self {
        Self::new(horizon, move |t| {
            kappa((horizon - t).max(0.0), alpha).expect("kappa on nonnegative remaining time")
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }
}

impl std::fmt::Debug for GainFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GainFunction")
            .field("horizon", &self.horizon)
            .finish_non_exhaustive()
    }
}

/// Expected cost of a simple feedback strategy u = -v(t) q, split into the
/// phi(0) q0^2 term and the time integral of phi.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostBreakdown {
    pub phi0_term: f64,
    pub integral_term: f64,
    pub total: f64,
}

/// Expected cost of the simple feedback strategy with gain `v` at drift `a`,
/// from the backward linear ODE
///
/// ```text
/// -phi'(t) = 2 phi(t)(a - v(t)) + 1 + v(t)^2,   phi(T) = 0,
/// J = phi(0) q0^2 + integral of phi over [0, T],
/// ```
///
/// integrated by classical RK4 on 10^4 steps together with the running
/// integral of phi.
pub fn feedback_cost(v: &GainFunction, a: f64, horizon: f64, q0: f64) -> SimResult<CostBreakdown> {
    if !(horizon > 0.0) {
        return Err(SimError::invalid("feedback_cost: horizon must be positive"));
    }
    const STEPS: usize = 10_000;
    let h = horizon / STEPS as f64;
    let rhs = |t: f64, phi: f64| {
        let vt = v.eval(t);
        if !vt.is_finite() {
            return f64::NAN;
        }
        -(2.0 * phi * (a - vt) + 1.0 + vt * vt)
    };
    let mut phi = 0.0;
    let mut integral = 0.0;
    let mut t = horizon;
    for _ in 0..STEPS {
        // One RK4 step of size -h for phi; Simpson-consistent update for the
        // integral using the stage values.
        let k1 = rhs(t, phi);
        let k2 = rhs(t - 0.5 * h, phi - 0.5 * h * k1);
        let k3 = rhs(t - 0.5 * h, phi - 0.5 * h * k2);
        let k4 = rhs(t - h, phi - h * k3);
        let phi_next = phi - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let mid1 = phi - 0.5 * h * k1;
        let mid2 = phi - 0.5 * h * k2;
        integral += (h / 6.0) * (phi + 2.0 * mid1 + 2.0 * mid2 + phi_next);
        phi = phi_next;
        t -= h;
        if !phi.is_finite() {
            return Err(SimError::invalid(
                "feedback_cost: phi diverged; gain not finite on [0, horizon]?",
            ));
        }
    }
    let phi0_term = phi * q0 * q0;
    Ok(CostBreakdown {
        phi0_term,
        integral_term: integral,
        total: phi0_term + integral,
    })
}
