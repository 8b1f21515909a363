//! Affine sequence-form constraints f(x) = a·x − b ≤ 0.

use crate::error::{Error, Result};
use crate::solver::Constraint;

/// Sparse affine constraint over a player's sequence index. Lower bounds
/// are stored negated: L ≤ a·x becomes (−a)·x − (−L) ≤ 0.
#[derive(Debug, Clone)]
pub struct LinearConstraint {
    coeffs: Vec<(usize, f64)>,
    offset: f64,
    num_seqs: usize,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<(usize, f64)>, offset: f64, num_seqs: usize) -> Result<Self> {
        for &(i, _) in &coeffs {
            if i >= num_seqs {
                return Err(Error::SequenceOutOfRange {
                    index: i,
                    len: num_seqs,
                });
            }
        }
        Ok(LinearConstraint {
            coeffs,
            offset,
            num_seqs,
        })
    }

    /// x_seq ≤ limit.
    pub fn upper_bound(seq: usize, limit: f64, num_seqs: usize) -> Result<Self> {
        Self::new(vec![(seq, 1.0)], limit, num_seqs)
    }

    /// x_seq ≥ limit.
    pub fn lower_bound(seq: usize, limit: f64, num_seqs: usize) -> Result<Self> {
        Self::new(vec![(seq, -1.0)], -limit, num_seqs)
    }

    pub fn coeffs(&self) -> &[(usize, f64)] {
        &self.coeffs
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }
}

/// Builder matching the constraint sense f(x) = a·x − b ≤ 0.
pub fn linear_constraint(
    coeffs: Vec<(usize, f64)>,
    offset: f64,
    num_seqs: usize,
) -> Result<LinearConstraint> {
    LinearConstraint::new(coeffs, offset, num_seqs)
}

impl Constraint for LinearConstraint {
    fn value(&self, x: &[f64]) -> f64 {
        let mut v = -self.offset;
        for &(i, c) in &self.coeffs {
            v += c * x[i];
        }
        v
    }

    fn add_subgradient(&self, _x: &[f64], scale: f64, out: &mut [f64]) {
        for &(i, c) in &self.coeffs {
            out[i] += scale * c;
        }
    }

    fn linear_norm1(&self) -> Option<f64> {
        Some(self.coeffs.iter().map(|(_, c)| c.abs()).sum())
    }

    fn linear_row(&self, num_seqs: usize) -> Option<(Vec<f64>, f64)> {
        let mut row = vec![0.0; num_seqs.max(self.num_seqs)];
        for &(i, c) in &self.coeffs {
            row[i] += c;
        }
        Some((row, self.offset))
    }
}
