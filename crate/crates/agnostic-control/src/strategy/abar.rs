use crate::error::{SimError, SimResult};

/// Which band edge the crossing came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbarSign {
    Plus,
    Minus,
}

/// Drift estimate read off a band-crossing time: the first time the
/// uncontrolled path reaches (1 +/- eps) q0 inverts to
/// abar = log(1 +/- eps) / tau.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbarEstimate {
    pub value: f64,
    pub crossing_time: f64,
    pub sign: AbarSign,
    pub epsilon: f64,
}

pub fn estimate_abar(tau: f64, epsilon: f64, sign: AbarSign) -> SimResult<AbarEstimate> {
    if !(tau > 0.0) {
        return Err(SimError::invalid(format!(
            "abar: crossing time must be positive, got {tau}"
        )));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(SimError::invalid(format!(
            "abar: epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    let value = match sign {
        AbarSign::Plus => (1.0 + epsilon).ln() / tau,
        AbarSign::Minus => (1.0 - epsilon).ln() / tau,
    };
    Ok(AbarEstimate {
        value,
        crossing_time: tau,
        sign,
        epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_inversion_is_exact() {
        // q = q0 e^{at} with a = 2 crosses (1+eps)q0 at tau = log(1.1)/2;
        // the estimate inverts back to exactly 2.0 in floating point.
        let tau = 1.1f64.ln() / 2.0;
        let est = estimate_abar(tau, 0.1, AbarSign::Plus).unwrap();
        assert_eq!(est.value, 2.0);
    }

    #[test]
    fn minus_side_formula() {
        let est = estimate_abar(0.05, 0.1, AbarSign::Minus).unwrap();
        let expect = 0.9f64.ln() / 0.05;
        assert_eq!(est.value, expect);
        assert!((est.value + 2.107).abs() < 5e-4);
        assert!(est.value < 0.0);
    }

    #[test]
    fn product_identity_holds_to_a_ulp() {
        for tau in [1e-6, 0.013, 0.7, 3.0] {
            for eps in [0.01, 0.1, 0.5] {
                let est = estimate_abar(tau, eps, AbarSign::Plus).unwrap();
                let target = (1.0 + eps).ln();
                let got = est.value * est.crossing_time;
                assert!(
                    (got - target).abs() <= target.abs() * f64::EPSILON,
                    "value*tau = {got} vs log(1+eps) = {target}"
                );
            }
        }
    }

    #[test]
    fn signs_match_bands() {
        assert!(estimate_abar(0.5, 0.2, AbarSign::Plus).unwrap().value > 0.0);
        assert!(estimate_abar(0.5, 0.2, AbarSign::Minus).unwrap().value < 0.0);
        assert!(estimate_abar(0.0, 0.2, AbarSign::Plus).is_err());
        assert!(estimate_abar(-1.0, 0.2, AbarSign::Plus).is_err());
        assert!(estimate_abar(0.5, 1.0, AbarSign::Plus).is_err());
    }
}
