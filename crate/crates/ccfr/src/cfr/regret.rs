//! Regret matching.

use crate::error::{Error, Result};

/// Distribution proportional to positive regret; uniform when no regret is
/// positive.
pub fn regret_match(regrets: &[f64]) -> Result<Vec<f64>> {
    if regrets.is_empty() {
        return Err(Error::InvalidParam("regret_match on empty list".into()));
    }
    let mut out = vec![0.0; regrets.len()];
    regret_match_into(regrets, &mut out);
    Ok(out)
}

pub fn regret_match_into(regrets: &[f64], out: &mut [f64]) {
    let mut sum = 0.0;
    for &r in regrets {
        if r > 0.0 {
            sum += r;
        }
    }
    if sum > 0.0 {
        for (o, &r) in out.iter_mut().zip(regrets) {
            *o = if r > 0.0 { r / sum } else { 0.0 };
        }
    } else {
        let u = 1.0 / regrets.len() as f64;
        for o in out.iter_mut() {
            *o = u;
        }
    }
}
