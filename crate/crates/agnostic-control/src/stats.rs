//! Small numeric helpers: order-stable summation, mean / standard error,
//! and a Gaussian CDF used by the tail oracles in tests and claims.

/// Pairwise (cascade) summation. Deterministic for a fixed slice regardless
/// of how the values were produced, and much better conditioned than a
/// running sum for long Monte Carlo vectors.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BASE: usize = 32;
    if xs.len() <= BASE {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Sample mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Binomial standard error of an empirical frequency.
pub fn binomial_se(freq: f64, n: usize) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    (freq * (1.0 - freq) / n as f64).sqrt()
}

/// Standard normal CDF, double-precision rational approximation
/// (G. West, "Better approximations to cumulative normal functions").
/// Max absolute error ~1e-15; pinned against reference values in tests.
pub fn normal_cdf(x: f64) -> f64 {
    let xabs = x.abs();
    let cum = if xabs > 37.0 {
        0.0
    } else {
        let e = (-xabs * xabs / 2.0).exp();
        if xabs < 7.071_067_811_865_48 {
            let mut num = 3.52624965998911e-2 * xabs + 0.700383064443688;
            num = num * xabs + 6.37396220353165;
            num = num * xabs + 33.912866078383;
            num = num * xabs + 112.079291497871;
            num = num * xabs + 221.213596169931;
            num = num * xabs + 220.206867912376;
            let mut den = 8.83883476483184e-2 * xabs + 1.75566716318264;
            den = den * xabs + 16.064177579207;
            den = den * xabs + 86.7807322029461;
            den = den * xabs + 296.564248779674;
            den = den * xabs + 637.333633378831;
            den = den * xabs + 793.826512519948;
            den = den * xabs + 440.413735824752;
            e * num / den
        } else {
            let mut b = xabs + 0.65;
            b = xabs + 4.0 / b;
            b = xabs + 3.0 / b;
            b = xabs + 2.0 / b;
            b = xabs + 1.0 / b;
            e / (b * 2.506628274631)
        }
    };
    if x > 0.0 {
        1.0 - cum
    } else {
        cum
    }
}
