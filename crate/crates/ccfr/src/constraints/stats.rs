//! Wilson score intervals and the standard-normal quantile.

use crate::error::{Error, Result};

/// Inverse standard-normal CDF by rational approximation (Acklam's
/// coefficients), absolute error well under 1e-8 across (0,1).
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidParam(format!(
            "normal_quantile needs p in (0,1), got {p}"
        )));
    }
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    Ok(x)
}

/// Confidence interval from inverting the binomial score test. With
/// p̂ = successes/n and z the normal quantile at (1+γ)/2:
/// center (p̂ + z²/2n)/(1 + z²/n), half-width
/// z/(1+z²/n)·√(p̂(1−p̂)/n + z²/4n²); clipped to [0,1].
pub fn wilson_interval(successes: u64, n: u64, gamma: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::InvalidParam("wilson_interval needs n >= 1".into()));
    }
    if successes > n {
        return Err(Error::InvalidParam(format!(
            "successes {successes} > n {n}"
        )));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParam(format!(
            "confidence must be in (0,1), got {gamma}"
        )));
    }
    let z = normal_quantile(0.5 * (1.0 + gamma))?;
    let nf = n as f64;
    let p_hat = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p_hat + z2 / (2.0 * nf)) / denom;
    let half = (z / denom) * (p_hat * (1.0 - p_hat) / nf + z2 / (4.0 * nf * nf)).sqrt();
    // The boundary cases collapse exactly; avoid float residue there.
    let lower = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let upper = if successes == n {
        1.0
    } else {
        (center + half).min(1.0)
    };
    Ok((lower, upper))
}

/// Per-statistic interval record.
#[derive(Debug, Clone)]
pub struct IntervalBound {
    pub statistic: String,
    pub lower: f64,
    pub upper: f64,
    pub confidence: f64,
    pub n: u64,
    pub successes: u64,
}

impl IntervalBound {
    pub fn wilson(statistic: String, successes: u64, n: u64, gamma: f64) -> Result<Self> {
        let (lower, upper) = wilson_interval(successes, n, gamma)?;
        Ok(IntervalBound {
            statistic,
            lower,
            upper,
            confidence: gamma,
            n,
            successes,
        })
    }
}
