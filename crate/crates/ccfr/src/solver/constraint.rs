//! Convex constraints over sequence-form strategies.

use crate::efg::Player;

/// A convex function f over a player's realization polytope, constrained as
/// f(x) ≤ 0. Evaluation must be pure; the same object is queried
/// concurrently by parallel solves.
pub trait Constraint: Send + Sync {
    fn value(&self, x: &[f64]) -> f64;

    /// Accumulate `scale · ∇f(x)` into `out` (a subgradient at
    /// nondifferentiable points; the implementation picks which).
    fn add_subgradient(&self, x: &[f64], scale: f64, out: &mut [f64]);

    fn subgradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        self.add_subgradient(x, 1.0, &mut g);
        g
    }

    /// Exact ‖∇f‖₁ for affine constraints.
    fn linear_norm1(&self) -> Option<f64> {
        None
    }

    /// Dense affine row (a, b) with f(x) = a·x − b, when the constraint is
    /// affine. `a[0]` multiplies the fixed x_∅ = 1 entry.
    fn linear_row(&self, num_seqs: usize) -> Option<(Vec<f64>, f64)> {
        let _ = num_seqs;
        None
    }
}

/// Ordered constraint set on one player's strategy.
pub struct ConstraintSet {
    pub player: Player,
    items: Vec<Box<dyn Constraint>>,
}

impl ConstraintSet {
    pub fn new(player: Player) -> Self {
        ConstraintSet {
            player,
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, c: impl Constraint + 'static) {
        self.items.push(Box::new(c));
    }

    pub fn push_boxed(&mut self, c: Box<dyn Constraint>) {
        self.items.push(c);
    }

    pub fn k(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, i: usize) -> &dyn Constraint {
        self.items[i].as_ref()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Constraint> {
        self.items.iter().map(|b| b.as_ref())
    }

    pub fn values_into(&self, x: &[f64], out: &mut [f64]) {
        for (o, c) in out.iter_mut().zip(&self.items) {
            *o = c.value(x);
        }
    }

    pub fn values(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.items.len()];
        self.values_into(x, &mut out);
        out
    }

    /// Σ_i λ_i ∇f_i(x), written into `out`.
    pub fn tilt_into(&self, lambda: &[f64], x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for (c, &l) in self.items.iter().zip(lambda) {
            if l != 0.0 {
                c.add_subgradient(x, l, out);
            }
        }
    }

    pub fn all_linear(&self) -> bool {
        self.items.iter().all(|c| c.linear_norm1().is_some())
    }

    /// Dense affine rows when every constraint is affine.
    pub fn linear_rows(&self, num_seqs: usize) -> Option<Vec<(Vec<f64>, f64)>> {
        self.items.iter().map(|c| c.linear_row(num_seqs)).collect()
    }

    pub fn sum_positive(values: &[f64]) -> f64 {
        values.iter().map(|v| v.max(0.0)).sum()
    }

    /// Spot-check convexity (midpoint inequality) and subgradient planes on
    /// sample points; returns the worst violation found.
    pub fn audit_convexity(&self, samples: &[Vec<f64>]) -> f64 {
        let mut worst = 0.0f64;
        for pair in samples.windows(2) {
            let (x, y) = (&pair[0], &pair[1]);
            let mid: Vec<f64> = x.iter().zip(y).map(|(a, b)| 0.5 * (a + b)).collect();
            for c in &self.items {
                let fx = c.value(x);
                let fy = c.value(y);
                let fm = c.value(&mid);
                worst = worst.max(fm - 0.5 * (fx + fy));
                let g = c.subgradient(x);
                let plane: f64 = fx
                    + g.iter()
                        .zip(y.iter().zip(x.iter()))
                        .map(|(gi, (yi, xi))| gi * (yi - xi))
                        .sum::<f64>();
                worst = worst.max(plane - fy);
            }
        }
        worst
    }
}
