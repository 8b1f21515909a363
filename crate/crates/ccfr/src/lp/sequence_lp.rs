//! Sequence-form LP for (constrained) zero-sum equilibria.
//!
//! The maximizer's plan x ranges over its realization polytope Ex = e,
//! x ≥ 0; the inner minimization over the opponent's polytope is dualized
//! into free values q (one per opponent flow row), giving
//!
//!   max f·q  s.t.  Ex = e,  F^T q − A^T x ≤ 0,  a_i·x ≤ b_i,  x ≥ 0,
//!
//! with one extra row per linear strategy constraint. The duals of those
//! extra rows are the Lagrange multipliers λ*. Free q is split into
//! q⁺ − q⁻ for the nonnegative-variable simplex.

use crate::efg::{GameTree, Player, SequenceFormStrategy};
use crate::error::{Error, Result};
use crate::lp::simplex::{simplex_solve, Lp, LpRow, LpStatus, Rel};
use crate::solver::ConstraintSet;

/// Desk-scale guard: sequences per player.
pub const MAX_SEQUENCES: usize = 5_000;

#[derive(Debug, Clone)]
pub struct SequenceLp {
    pub lp: Lp,
    pub num_x: usize,
    /// Dual value variables (before the ± split).
    pub num_q: usize,
    pub num_extra: usize,
    /// Row index of the first extra (strategy-constraint) row.
    extra_rows_start: usize,
    /// Payoff columns: A^T x coefficient per (opponent sequence, own
    /// sequence) pair, sparse by opponent sequence.
    payoff: Vec<Vec<(usize, f64)>>,
}

#[derive(Debug, Clone)]
pub struct LpEquilibrium {
    pub x: SequenceFormStrategy,
    pub value: f64,
    /// λ* for the extra constraint rows.
    pub lambda: Vec<f64>,
    pub status: LpStatus,
    pub pivots: usize,
    pub max_primal_residual: f64,
    pub max_cs_residual: f64,
}

/// Assemble the LP for `player` (the maximizer) with extra linear rows on
/// that player's sequences.
pub fn build_sequence_lp(
    game: &GameTree,
    player: Player,
    extra: &ConstraintSet,
    override_scale_guard: bool,
) -> Result<SequenceLp> {
    let own = game.seq_index(player)?;
    let opp_player = player.other();
    let opp = game.seq_index(opp_player)?;
    if !override_scale_guard && (own.num_seqs() > MAX_SEQUENCES || opp.num_seqs() > MAX_SEQUENCES)
    {
        return Err(Error::ScaleGuard(format!(
            "{} and {} sequences exceed the desk-scale limit {MAX_SEQUENCES}",
            own.num_seqs(),
            opp.num_seqs()
        )));
    }
    let rows_extra = extra
        .linear_rows(own.num_seqs())
        .ok_or(Error::NonlinearConstraint)?;

    let nx = own.num_seqs();
    let nq = 1 + opp.layout.sets.len(); // one per opponent flow row
    let n = nx + 2 * nq; // x, q⁺, q⁻
    let qp = |i: usize| nx + i;
    let qm = |i: usize| nx + nq + i;

    // Payoff matrix A^T: per opponent sequence s₂, Σ_z π_c(z)·u_p(z)·x_{s₁}.
    let sign = player.sign();
    let mut payoff: Vec<Vec<(usize, f64)>> = vec![Vec::new(); opp.num_seqs()];
    for (i, &z) in game.terminals().iter().enumerate() {
        let u = game.utility(z) * sign;
        if u != 0.0 {
            let s_opp = opp.node_seq[z];
            let s_own = own.node_seq[z];
            payoff[s_opp].push((s_own, game.terminal_chance()[i] * u));
        }
    }

    let mut rows = Vec::new();

    // Own flow: x_∅ = 1; per infoset x_parent − Σ_a x_(I,a) = 0.
    {
        let mut r = vec![0.0; n];
        r[0] = 1.0;
        rows.push(LpRow {
            coeffs: r,
            rel: Rel::Eq,
            rhs: 1.0,
        });
    }
    for (id, slot) in own.layout.sets.iter().enumerate() {
        let mut r = vec![0.0; n];
        r[own.parent_seq[id]] += 1.0;
        for s in slot.first_seq..slot.first_seq + slot.actions {
            r[s] -= 1.0;
        }
        rows.push(LpRow {
            coeffs: r,
            rel: Rel::Eq,
            rhs: 0.0,
        });
    }

    // Opponent dual rows: (F^T q)_{s₂} − (A^T x)_{s₂} ≤ 0 per opponent
    // sequence. Column s₂ of F has +1 in flow rows whose parent sequence is
    // s₂ (and the root-normalization row for ∅), −1 in its own infoset row.
    for s2 in 0..opp.num_seqs() {
        let mut r = vec![0.0; n];
        if s2 == 0 {
            r[qp(0)] += 1.0;
            r[qm(0)] -= 1.0;
        } else {
            let (infoset, _) = opp.seq_owner[s2];
            r[qp(1 + infoset)] -= 1.0;
            r[qm(1 + infoset)] += 1.0;
        }
        for (id, &parent) in opp.parent_seq.iter().enumerate() {
            if parent == s2 {
                r[qp(1 + id)] += 1.0;
                r[qm(1 + id)] -= 1.0;
            }
        }
        for &(s_own, a) in &payoff[s2] {
            r[s_own] -= a;
        }
        rows.push(LpRow {
            coeffs: r,
            rel: Rel::Le,
            rhs: 0.0,
        });
    }

    let extra_rows_start = rows.len();
    for (coeffs, b) in &rows_extra {
        let mut r = vec![0.0; n];
        r[..nx].copy_from_slice(&coeffs[..nx]);
        rows.push(LpRow {
            coeffs: r,
            rel: Rel::Le,
            rhs: *b,
        });
    }

    // Objective: f·q = q_∅ (the root flow row's value).
    let mut objective = vec![0.0; n];
    objective[qp(0)] = 1.0;
    objective[qm(0)] = -1.0;

    Ok(SequenceLp {
        lp: Lp {
            maximize: true,
            objective,
            rows,
        },
        num_x: nx,
        num_q: nq,
        num_extra: rows_extra.len(),
        extra_rows_start,
        payoff,
    })
}

impl SequenceLp {
    /// x^T A y via the stored payoff columns (for assembly checks).
    pub fn bilinear_value(&self, x: &[f64], y_opp: &[f64]) -> f64 {
        let mut total = 0.0;
        for (s2, terms) in self.payoff.iter().enumerate() {
            if y_opp[s2] != 0.0 {
                for &(s1, a) in terms {
                    total += y_opp[s2] * a * x[s1];
                }
            }
        }
        total
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.lp.rows.len(), self.lp.objective.len())
    }
}

/// Constrained equilibrium of the maximizing `player`: optimal plan, game
/// value, and multipliers for the extra rows.
pub fn constrained_equilibrium(
    game: &GameTree,
    player: Player,
    extra: &ConstraintSet,
    override_scale_guard: bool,
) -> Result<LpEquilibrium> {
    let slp = build_sequence_lp(game, player, extra, override_scale_guard)?;
    let sol = simplex_solve(&slp.lp)?;
    let x = SequenceFormStrategy::from_values(player, sol.x[..slp.num_x].to_vec());
    let lambda = sol.duals[slp.extra_rows_start..slp.extra_rows_start + slp.num_extra].to_vec();
    Ok(LpEquilibrium {
        x,
        value: sol.objective,
        lambda,
        status: sol.status,
        pivots: sol.pivots,
        max_primal_residual: sol.max_primal_residual,
        max_cs_residual: sol.max_cs_residual,
    })
}

/// Unconstrained Nash profile: solve once per seat.
pub fn equilibrium_profile(
    game: &GameTree,
    override_scale_guard: bool,
) -> Result<(SequenceFormStrategy, SequenceFormStrategy, f64)> {
    let none1 = ConstraintSet::new(Player::One);
    let none2 = ConstraintSet::new(Player::Two);
    let a = constrained_equilibrium(game, Player::One, &none1, override_scale_guard)?;
    let b = constrained_equilibrium(game, Player::Two, &none2, override_scale_guard)?;
    if a.status != LpStatus::Optimal || b.status != LpStatus::Optimal {
        return Err(Error::InvalidParam("equilibrium LP not optimal".into()));
    }
    Ok((a.x, b.x, a.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::LinearConstraint;
    use crate::efg::{expected_utility, random_realization, validate};
    use crate::games::{build_kuhn, matching_pennies};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn matching_pennies_value_zero() {
        let g = matching_pennies();
        let none = ConstraintSet::new(Player::One);
        let eq = constrained_equilibrium(&g, Player::One, &none, false).unwrap();
        assert_eq!(eq.status, LpStatus::Optimal);
        assert!(eq.value.abs() <= 1e-9);
        // 2 sequences + ∅ per player.
        let slp = build_sequence_lp(&g, Player::One, &none, false).unwrap();
        assert_eq!(slp.num_x, 3);
    }

    #[test]
    fn kuhn_value_is_minus_one_eighteenth() {
        let g = build_kuhn().tree;
        let none = ConstraintSet::new(Player::One);
        let eq = constrained_equilibrium(&g, Player::One, &none, false).unwrap();
        assert_eq!(eq.status, LpStatus::Optimal);
        assert!((eq.value - (-1.0 / 18.0)).abs() <= 1e-6, "value {}", eq.value);
        assert!(validate(&eq.x, &g).unwrap().ok(1e-8));
        assert!(eq.max_primal_residual <= 1e-8);
        assert!(eq.max_cs_residual <= 1e-7);
    }

    #[test]
    fn vacuous_extra_row_changes_nothing() {
        let g = build_kuhn().tree;
        let none = ConstraintSet::new(Player::One);
        let base = constrained_equilibrium(&g, Player::One, &none, false).unwrap();
        let mut vac = ConstraintSet::new(Player::One);
        let n = g.num_seqs(Player::One).unwrap();
        vac.push(LinearConstraint::new(vec![], 1.0, n).unwrap());
        let with = constrained_equilibrium(&g, Player::One, &vac, false).unwrap();
        assert!((base.value - with.value).abs() <= 1e-9);
        assert!(with.lambda[0].abs() <= 1e-9);
    }

    #[test]
    fn binding_constraint_lowers_value_with_positive_dual() {
        let g = build_kuhn().tree;
        // Force betting a queen at least half the time: never optimal.
        let seq = g.lookup_seq(Player::One, "Q:", "bet").unwrap();
        let n = g.num_seqs(Player::One).unwrap();
        let mut cs = ConstraintSet::new(Player::One);
        cs.push(LinearConstraint::lower_bound(seq, 0.5, n).unwrap());
        let eq = constrained_equilibrium(&g, Player::One, &cs, false).unwrap();
        assert_eq!(eq.status, LpStatus::Optimal);
        let nash = -1.0 / 18.0;
        assert!(eq.value < nash - 1e-6, "constrained value {}", eq.value);
        assert!(eq.lambda[0] > 1e-6, "binding dual {}", eq.lambda[0]);
        // The plan satisfies the constraint.
        assert!(eq.x.values[seq] >= 0.5 - 1e-8);
    }

    #[test]
    fn slack_constraint_has_zero_dual() {
        let g = build_kuhn().tree;
        let seq = g.lookup_seq(Player::One, "Q:", "bet").unwrap();
        let n = g.num_seqs(Player::One).unwrap();
        let mut cs = ConstraintSet::new(Player::One);
        cs.push(LinearConstraint::upper_bound(seq, 0.999, n).unwrap());
        let eq = constrained_equilibrium(&g, Player::One, &cs, false).unwrap();
        assert!(eq.lambda[0].abs() <= 1e-9);
        assert!((eq.value - (-1.0 / 18.0)).abs() <= 1e-6);
    }

    #[test]
    fn payoff_columns_reproduce_expected_utility() {
        let g = build_kuhn().tree;
        let none = ConstraintSet::new(Player::One);
        let slp = build_sequence_lp(&g, Player::One, &none, false).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(97);
        for _ in 0..10 {
            let x = random_realization(&g, Player::One, &mut rng).unwrap();
            let y = random_realization(&g, Player::Two, &mut rng).unwrap();
            let via_lp = slp.bilinear_value(&x.values, &y.values);
            let direct = expected_utility(&x, &y, &g).unwrap();
            assert!((via_lp - direct).abs() <= 1e-10);
        }
    }

    #[test]
    fn strong_duality_at_constrained_optimum() {
        // Lagrangian value at (x*, λ*) equals the primal value: for the
        // binding row, value + λ*(b − a·x*) differs from value only through
        // complementary slackness, which the solver certifies.
        let g = build_kuhn().tree;
        let seq = g.lookup_seq(Player::One, "Q:", "bet").unwrap();
        let n = g.num_seqs(Player::One).unwrap();
        let mut cs = ConstraintSet::new(Player::One);
        cs.push(LinearConstraint::lower_bound(seq, 0.5, n).unwrap());
        let eq = constrained_equilibrium(&g, Player::One, &cs, false).unwrap();
        assert!(eq.max_cs_residual <= 1e-7);
        // Independent check: the best response value to x* matches the LP
        // value (x* is the constrained optimum, its worst case is v*).
        let b = crate::efg::behavioral_of(&eq.x, &g).unwrap();
        let br = crate::cfr::exact_best_response(&g, &b, Player::Two).unwrap().0;
        assert!((eq.value - (-br)).abs() <= 1e-7, "{} vs {}", eq.value, -br);
    }

    #[test]
    fn transposed_seat_solve_agrees() {
        // Solving for player 2 as maximizer gives the negated game value.
        let g = build_kuhn().tree;
        let none2 = ConstraintSet::new(Player::Two);
        let eq2 = constrained_equilibrium(&g, Player::Two, &none2, false).unwrap();
        assert!((eq2.value - 1.0 / 18.0).abs() <= 1e-6);
    }
}
