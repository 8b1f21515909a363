//! Exact and approximate best responses, exploitability.

use crate::cfr::state::{normalize_to_behavioral, PlayerState};
use crate::cfr::sweep::{maximize_over_sequences, opponent_reach_into, SweepScratch};
use crate::cfr::{checkpoints, CfrGame};
use crate::efg::{BehavioralStrategy, GameTree, Player};
use crate::error::Result;

/// Exact best response: max_{σ'} u_player(σ', opponent), computed by a
/// bottom-up walk choosing the argmax of opponent-and-chance-weighted action
/// values per infoset. Ties break toward the lowest action index.
pub fn exact_best_response(
    game: &GameTree,
    opponent: &BehavioralStrategy,
    player: Player,
) -> Result<(f64, BehavioralStrategy)> {
    let index = game.seq_index(player)?; // rejects imperfect-recall responder
    game.seq_index(opponent.player)?;
    let mut reach = vec![0.0; game.num_nodes()];
    opponent_reach_into(
        game,
        player,
        [&opponent.probs, &opponent.probs],
        &mut reach,
    );
    let mut rewards = vec![0.0; index.num_seqs()];
    let sign = player.sign();
    for &z in game.terminals() {
        let u = game.utility(z);
        if u != 0.0 {
            rewards[index.node_seq[z]] += reach[z] * sign * u;
        }
    }
    let mut pure = vec![0.0; index.num_seqs()];
    let value = maximize_over_sequences(index, &mut rewards, Some(&mut pure));
    Ok((
        value,
        BehavioralStrategy {
            player,
            probs: pure,
        },
    ))
}

/// ½(ε₁ + ε₂): the mean of both players' best-response gains. Zero exactly
/// at a Nash equilibrium.
pub fn exploitability(
    game: &GameTree,
    profile: (&BehavioralStrategy, &BehavioralStrategy),
) -> Result<f64> {
    let (br1, _) = exact_best_response(game, profile.1, Player::One)?;
    let (br2, _) = exact_best_response(game, profile.0, Player::Two)?;
    Ok(0.5 * (br1 + br2))
}

/// Regret matching for the responder only, against a fixed opponent.
/// Returns the best average-strategy value seen (evaluated on an
/// exponential checkpoint schedule) with the strategy that achieved it. The
/// reported value is monotone nondecreasing in `iters`.
pub fn approximate_best_response<G: CfrGame>(
    game: &G,
    opponent: &[f64],
    responder: Player,
    iters: usize,
) -> (f64, Vec<f64>) {
    let layout = game.layout(responder);
    let mut state = PlayerState::new(layout);
    let mut scratch = SweepScratch::default();
    let sign = responder.sign();
    let mut best = f64::NEG_INFINITY;
    let mut best_strat = normalize_to_behavioral(layout, &state.real_sum);
    let schedule = checkpoints(iters, 8);
    let mut next_cp = 0usize;
    for t in 1..=iters {
        let strats = match responder {
            Player::One => [state.strat.as_slice(), opponent],
            Player::Two => [opponent, state.strat.as_slice()],
        };
        game.sweep_values(responder, strats, None, &mut state.values, &mut scratch);
        state.apply_values(layout);
        game.realization_into(responder, &state.strat, &mut state.realization);
        for (s, r) in state.real_sum.iter_mut().zip(&state.realization) {
            *s += r;
        }
        if next_cp < schedule.len() && schedule[next_cp] == t {
            next_cp += 1;
            let avg = normalize_to_behavioral(layout, &state.real_sum);
            let strats = match responder {
                Player::One => [avg.as_slice(), opponent],
                Player::Two => [opponent, avg.as_slice()],
            };
            let value = sign * game.expected_value(strats);
            if value > best {
                best = value;
                best_strat = avg;
            }
        }
    }
    if best == f64::NEG_INFINITY {
        best = 0.0;
    }
    (best, best_strat)
}
