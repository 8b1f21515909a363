//! Bound constants and theorem right-hand sides.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::cfr::CfrGame;
use crate::efg::Player;
use crate::solver::constraint::ConstraintSet;

/// Constants entering the convergence bounds. F and G are exact for affine
/// constraint sets (ℓ₁ norms and polytope maximization); otherwise they are
/// sampled estimates and flagged as such.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    /// Δ_u = max_z u(z) − min_z u(z).
    pub delta_u: f64,
    pub k: usize,
    /// Max actions at any of the constrained player's infosets.
    pub max_actions: usize,
    /// F = max_i ‖∇f_i(x)‖₁.
    pub subgradient_norm_bound: f64,
    /// G = max_i |f_i(x)| over the polytope.
    pub value_bound: f64,
    /// M = max over pure strategies of Σ_I π₁(I).
    pub reach_weight: f64,
    /// Whether F and G are exact rather than sampled.
    pub exact_fg: bool,
}

const FG_SAMPLES: usize = 1000;

pub fn compute_bound_constants<G: CfrGame>(
    game: &G,
    constraints: &ConstraintSet,
    seed: u64,
) -> BoundReport {
    let (lo, hi) = game.utility_range();
    let layout = game.layout(Player::One);
    let max_actions = layout.sets.iter().map(|s| s.actions).max().unwrap_or(1);
    let reach_weight = game.reach_weight_bound(Player::One);

    let (f_bound, g_bound, exact) = if constraints.is_empty() {
        (0.0, 0.0, true)
    } else if constraints.all_linear() {
        let mut f = 0.0f64;
        let mut g = 0.0f64;
        for (coeffs, b) in constraints.linear_rows(layout.num_seqs).unwrap() {
            f = f.max(coeffs.iter().map(|c| c.abs()).sum());
            let hi_v = game.maximize_linear(Player::One, &coeffs) - b;
            let neg: Vec<f64> = coeffs.iter().map(|c| -c).collect();
            let lo_v = -game.maximize_linear(Player::One, &neg) - b;
            g = g.max(hi_v.abs()).max(lo_v.abs());
        }
        (f, g, true)
    } else {
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x5eed_b0b0);
        let mut f = 0.0f64;
        let mut g = 0.0f64;
        let mut x = vec![0.0; layout.num_seqs];
        for _ in 0..FG_SAMPLES {
            let strat = game.random_strategy(Player::One, &mut rng);
            game.realization_into(Player::One, &strat, &mut x);
            for c in constraints.iter() {
                g = g.max(c.value(&x).abs());
                let grad = c.subgradient(&x);
                f = f.max(grad.iter().map(|v| v.abs()).sum());
            }
        }
        (f, g, false)
    };

    BoundReport {
        delta_u: hi - lo,
        k: constraints.k(),
        max_actions,
        subgradient_norm_bound: f_bound,
        value_bound: g_bound,
        reach_weight,
        exact_fg: exact,
    }
}

/// Evaluated right-hand sides of the convergence bounds at iteration `t`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoremBounds {
    /// Exploitability-gap bound: 4(Δ_u + kβF)M√|A|/√T + 2R_λ.
    pub thm1_rhs: f64,
    /// Feasibility bound with arbitrary β:
    /// R_λ/β + (Δ_u + 2kβF)M√|A|/(β√T) + Δ_u/β.
    pub thm2_rhs: f64,
    /// Per-constraint feasibility with β > λ*_i:
    /// R_λ/(β−λ*_i) + 2(Δ_u + kβF)M√|A|/((β−λ*_i)√T).
    pub thm3_rhs: Option<Vec<f64>>,
    /// Corollary feasibility bound under the fixed-rate schedule.
    pub corollary_feasibility: Option<Vec<f64>>,
    /// Corollary exploitability bound: (4(Δ_u + kβF)M√|A| + 2βG)/√T.
    pub corollary_exploitability: f64,
}

pub fn theorem_bounds(
    report: &BoundReport,
    t: usize,
    beta: f64,
    lambda_regret: f64,
    lambda_star: Option<&[f64]>,
) -> TheoremBounds {
    let sqrt_t = (t.max(1) as f64).sqrt();
    let root_a = (report.max_actions as f64).sqrt();
    let m = report.reach_weight;
    let d = report.delta_u;
    let k = report.k as f64;
    let f = report.subgradient_norm_bound;
    let g = report.value_bound;

    let thm1_rhs = 4.0 * (d + k * beta * f) * m * root_a / sqrt_t + 2.0 * lambda_regret;
    let thm2_rhs = if beta > 0.0 {
        lambda_regret / beta + (d + 2.0 * k * beta * f) * m * root_a / (beta * sqrt_t) + d / beta
    } else {
        f64::INFINITY
    };
    let per_constraint = |ls: &[f64]| -> (Vec<f64>, Vec<f64>) {
        let mut thm3 = Vec::with_capacity(ls.len());
        let mut cor = Vec::with_capacity(ls.len());
        for &l in ls {
            let gap = beta - l;
            if gap > 0.0 {
                thm3.push(lambda_regret / gap + 2.0 * (d + k * beta * f) * m * root_a / (gap * sqrt_t));
                cor.push((beta * g + 2.0 * (d + k * beta * f) * m * root_a) / (gap * sqrt_t));
            } else {
                thm3.push(f64::INFINITY);
                cor.push(f64::INFINITY);
            }
        }
        (thm3, cor)
    };
    let (thm3_rhs, corollary_feasibility) = match lambda_star {
        Some(ls) => {
            let (a, b) = per_constraint(ls);
            (Some(a), Some(b))
        }
        None => (None, None),
    };
    let corollary_exploitability =
        (4.0 * (d + k * beta * f) * m * root_a + 2.0 * beta * g) / sqrt_t;

    TheoremBounds {
        thm1_rhs,
        thm2_rhs,
        thm3_rhs,
        corollary_feasibility,
        corollary_exploitability,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efg::Player;
    use crate::games::build_kuhn;

    #[test]
    fn k_zero_reduces_to_cfr_bound() {
        let g = build_kuhn().tree;
        let cs = ConstraintSet::new(Player::One);
        let report = compute_bound_constants(&g, &cs, 1);
        assert_eq!(report.k, 0);
        assert_eq!(report.delta_u, 4.0);
        assert_eq!(report.max_actions, 2);
        let b = theorem_bounds(&report, 10_000, 7.0, 0.0, None);
        let expected = 4.0 * 4.0 * report.reach_weight * (2.0f64).sqrt() / 100.0;
        assert!((b.thm1_rhs - expected).abs() <= 1e-12);
    }

    #[test]
    fn thm2_limit_is_delta_over_beta() {
        let g = build_kuhn().tree;
        let cs = ConstraintSet::new(Player::One);
        let report = compute_bound_constants(&g, &cs, 1);
        let beta = 8.0;
        let r_lambda = 0.25;
        let b = theorem_bounds(&report, usize::MAX >> 8, beta, r_lambda, None);
        let limit = r_lambda / beta + report.delta_u / beta;
        assert!((b.thm2_rhs - limit).abs() <= 1e-6);
    }

    #[test]
    fn single_infoset_reach_weight_is_one() {
        let g = crate::games::matching_pennies();
        assert_eq!(g.reach_weight_bound(Player::One), 1.0);
        assert_eq!(g.reach_weight_bound(Player::Two), 1.0);
    }

    /// Enumerate all pure strategies and sum own reach over infosets.
    fn reach_weight_enumeration(game: &crate::efg::GameTree, player: Player) -> f64 {
        let index = game.seq_index(player).unwrap();
        let layout = &index.layout;
        let n = layout.sets.len();
        let mut counters = vec![0usize; n];
        let mut best = 0.0f64;
        loop {
            // Reach of each infoset under this pure strategy.
            let mut total = 0.0;
            for id in 0..n {
                // Walk the parent-sequence chain; reached iff every chosen
                // action on the chain matches the counter.
                let mut reached = true;
                let mut seq = index.parent_seq[id];
                while seq != 0 {
                    let (owner, action) = index.seq_owner[seq];
                    if counters[owner] != action {
                        reached = false;
                        break;
                    }
                    seq = index.parent_seq[owner];
                }
                if reached {
                    total += 1.0;
                }
            }
            best = best.max(total);
            let mut i = 0;
            loop {
                if i == n {
                    return best;
                }
                counters[i] += 1;
                if counters[i] < layout.sets[i].actions {
                    break;
                }
                counters[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn kuhn_reach_weight_matches_enumeration() {
        let g = build_kuhn().tree;
        for p in [Player::One, Player::Two] {
            let dp = g.reach_weight_bound(p);
            let oracle = reach_weight_enumeration(&g, p);
            assert_eq!(dp, oracle, "player {p:?}");
        }
        assert_eq!(g.reach_weight_bound(Player::One), 6.0);
    }

    #[test]
    fn delta_u_of_unit_utilities() {
        let g = crate::games::matching_pennies();
        let cs = ConstraintSet::new(Player::One);
        let report = compute_bound_constants(&g, &cs, 1);
        assert_eq!(report.delta_u, 2.0);
    }
}
