use crate::brownian::BrownianPath;
use crate::error::{SimError, SimResult, DIVERGENCE_GUARD};
use crate::history::History;
use crate::strategy::Strategy;
use crate::trajectory::Trajectory;

/// Grid steps covering `horizon` at step `dt`: ceil(horizon/dt), guarded
/// against the floating-point quotient landing a hair above an integer.
pub fn steps_for(horizon: f64, dt: f64) -> usize {
    ((horizon / dt) * (1.0 - 1e-12)).ceil() as usize
}

/// Integrate the controlled system dq = (aq + u)dt + dW by Euler-Maruyama
/// against a fixed noise path, accumulating left-endpoint cost quadrature.
///
/// The strategy sees only the grid prefix of (t, q); gains change at
/// stopping times snapped to grid points. The run aborts with
/// [`SimError::Diverged`] once |q| exceeds the divergence guard.
pub fn simulate(
    strategy: &dyn Strategy,
    a: f64,
    q0: f64,
    horizon: f64,
    path: &BrownianPath,
) -> SimResult<Trajectory> {
    if !(horizon > 0.0) {
        return Err(SimError::invalid(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    if !path.covers(horizon) {
        return Err(SimError::invalid(format!(
            "noise path covers {} < horizon {horizon}",
            path.len() as f64 * path.dt()
        )));
    }
    let dt = path.dt();
    let n = steps_for(horizon, dt);
    let mut controller = strategy.start(horizon, q0)?;

    let mut times = Vec::with_capacity(n + 1);
    let mut q = Vec::with_capacity(n + 1);
    let mut u = Vec::with_capacity(n);
    let mut running_cost = Vec::with_capacity(n + 1);
    times.push(0.0);
    q.push(q0);
    running_cost.push(0.0);

    let mut cost = 0.0;
    let dw = path.increments();
    for k in 0..n {
        let hist = History::new(&times, &q);
        let uk = controller.control(&hist)?;
        if !uk.is_finite() {
            return Err(SimError::ContractViolation {
                time: times[k],
                detail: format!("strategy {} produced non-finite control", strategy.label()),
            });
        }
        let qk = q[k];
        cost += (qk * qk + uk * uk) * dt;
        let qn = qk + (a * qk + uk) * dt + dw[k];
        let tn = (k + 1) as f64 * dt;
        if !qn.is_finite() || qn.abs() > DIVERGENCE_GUARD {
            return Err(SimError::Diverged { time: tn });
        }
        u.push(uk);
        q.push(qn);
        times.push(tn);
        running_cost.push(cost);
    }

    Ok(Trajectory {
        dt,
        times,
        q,
        u,
        a,
        cost,
        running_cost,
        stops: controller.drain_events(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::constant_gain;
    use approx::assert_relative_eq;

    #[test]
    fn steps_rounding_is_exact_on_clean_grids() {
        assert_eq!(steps_for(1.0, 1e-3), 1000);
        assert_eq!(steps_for(1.0, 2e-5), 50_000);
        assert_eq!(steps_for(0.97, 1e-3), 970);
        assert_eq!(steps_for(1.0005, 1e-3), 1001);
    }

    #[test]
    fn zero_noise_zero_control_holds_position() {
        let path = BrownianPath::zeros(1.0, 1e-3).unwrap();
        let null = constant_gain(0.0).unwrap();
        let tr = simulate(&null, 0.0, 2.0, 1.0, &path).unwrap();
        assert!(tr.q.iter().all(|&x| x == 2.0));
        assert_relative_eq!(tr.cost, 4.0, max_relative = 1e-12);
        assert_eq!(tr.q.len(), tr.times.len());
        assert_eq!(tr.u.len(), tr.times.len() - 1);
    }

    #[test]
    fn zero_noise_unit_drift_grows_exponentially() {
        let dt = 1e-4;
        let path = BrownianPath::zeros(1.0, dt).unwrap();
        let null = constant_gain(0.0).unwrap();
        let tr = simulate(&null, 1.0, 1.0, 1.0, &path).unwrap();
        let q1 = *tr.q.last().unwrap();
        assert!((q1 - std::f64::consts::E).abs() < 0.01, "q(1) = {q1}");
    }

    #[test]
    fn running_cost_is_nonnegative_and_nondecreasing() {
        let path = BrownianPath::generate(1.0, 1e-3, 5).unwrap();
        let cg = constant_gain(1.0).unwrap();
        let tr = simulate(&cg, 1.0, 1.0, 1.0, &path).unwrap();
        assert!(tr.running_cost.windows(2).all(|w| w[1] >= w[0]));
        assert!(tr.running_cost[0] == 0.0);
        assert_relative_eq!(*tr.running_cost.last().unwrap(), tr.cost);
    }

    #[test]
    fn determinism_bitwise() {
        let path = BrownianPath::generate(1.0, 1e-3, 17).unwrap();
        let cg = constant_gain(0.5).unwrap();
        let a = simulate(&cg, 0.7, 1.0, 1.0, &path).unwrap();
        let b = simulate(&cg, 0.7, 1.0, 1.0, &path).unwrap();
        assert_eq!(a.q, b.q);
        assert_eq!(a.u, b.u);
        assert_eq!(a.cost.to_bits(), b.cost.to_bits());
    }

    #[test]
    fn unstable_uncontrolled_path_diverges() {
        let path = BrownianPath::zeros(1.0, 1e-3).unwrap();
        let null = constant_gain(0.0).unwrap();
        let err = simulate(&null, 40.0, 1.0, 1.0, &path).unwrap_err();
        match err {
            SimError::Diverged { time } => assert!(time > 0.0 && time < 1.0),
            other => panic!("expected divergence, got {other}"),
        }
    }

    #[test]
    fn deterministic_cost_converges_first_order_in_dt() {
        // CG(2) at a = 1 with zero noise: analytic cost
        // (1+4) q0^2 (e^{2(a-2)T} - 1) / (2(a-2)).
        let analytic = 5.0 * (1.0 - (-2.0f64).exp()) / 2.0;
        let cg = constant_gain(2.0).unwrap();
        let mut errs = Vec::new();
        for dt in [2e-3, 1e-3, 5e-4] {
            let path = BrownianPath::zeros(1.0, dt).unwrap();
            let tr = simulate(&cg, 1.0, 1.0, 1.0, &path).unwrap();
            errs.push((tr.cost - analytic).abs());
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!(
                (2.0 / 1.5..=2.0 * 1.5).contains(&ratio),
                "halving dt changed error by {ratio}"
            );
        }
    }
}
