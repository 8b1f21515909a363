//! Tilt queries and the closed-form tilted values.
//!
//! The closed form exists as an independent check of the sweep recurrences:
//! the tilted action value equals the untilted counterfactual value minus
//! the tilt at (I,a) minus every descendant tilt weighted by the player's
//! own reach from (I,a) to it. It is deliberately implemented over the
//! infoset forest (front propagation of own reach), not via the sweep.

use crate::cfr::{CfrGame, SweepScratch};
use crate::efg::{BehavioralStrategy, GameTree, InfosetId, Player};
use crate::error::{Error, Result};
use crate::solver::constraint::ConstraintSet;

/// c(I,a) = Σ_i λ_i ∇_{(I,a)} f_i(x): the constraint tilt subtracted from
/// the counterfactual action value.
pub fn tilt(
    constraints: &ConstraintSet,
    lambda: &[f64],
    x: &[f64],
    seq: usize,
) -> Result<f64> {
    if seq >= x.len() {
        return Err(Error::SequenceOutOfRange {
            index: seq,
            len: x.len(),
        });
    }
    let mut buf = vec![0.0; x.len()];
    constraints.tilt_into(lambda, x, &mut buf);
    Ok(buf[seq])
}

/// Closed-form ṽ(I,σ,a) (with `action` given) or ṽ(I,σ) for the constrained
/// player, using an explicit tilt vector c over that player's sequences.
pub fn tilted_value_closed_form(
    game: &GameTree,
    profile: (&BehavioralStrategy, &BehavioralStrategy),
    player: Player,
    tilt_vec: &[f64],
    infoset: InfosetId,
    action: Option<usize>,
) -> Result<f64> {
    let index = game.seq_index(player)?;
    if infoset >= index.layout.sets.len() {
        return Err(Error::UnknownInfoset(format!("#{infoset}")));
    }
    let own = match player {
        Player::One => &profile.0.probs,
        Player::Two => &profile.1.probs,
    };

    // Untilted counterfactual values from a plain sweep.
    let mut values = vec![0.0; index.num_seqs()];
    let mut scratch = SweepScratch::default();
    game.sweep_values(
        player,
        [&profile.0.probs, &profile.1.probs],
        None,
        &mut values,
        &mut scratch,
    );

    // Own reach seeded at the queried point, front-propagated down the
    // infoset forest. Each sequence is written by its unique owner, so
    // additive writes keep the seed intact.
    let mut rel = vec![0.0; index.num_seqs()];
    let base_value = match action {
        Some(a) => {
            let slot = index.layout.slot(infoset);
            if a >= slot.actions {
                return Err(Error::UnknownAction {
                    infoset: format!("#{infoset}"),
                    action: format!("#{a}"),
                });
            }
            rel[slot.first_seq + a] += 1.0;
            values[slot.first_seq + a]
        }
        None => {
            let mut v = 0.0;
            for s in index.layout.seq_range(infoset) {
                rel[s] += own[s];
                v += own[s] * values[s];
            }
            v
        }
    };
    for set in index.topo() {
        if set == infoset {
            continue;
        }
        let up = rel[index.parent_seq[set]];
        if up != 0.0 {
            for s in index.layout.seq_range(set) {
                rel[s] += up * own[s];
            }
        }
    }
    let tilt_total: f64 = rel.iter().zip(tilt_vec).map(|(r, c)| r * c).sum();
    Ok(base_value - tilt_total)
}

/// Convenience wrapper: derives the tilt vector from (λ, constraints) at
/// x = SEQ(σ₁ of `profile`) and evaluates the closed form.
pub fn tilted_values_closed_form(
    game: &GameTree,
    profile: (&BehavioralStrategy, &BehavioralStrategy),
    lambda: &[f64],
    constraints: &ConstraintSet,
    infoset: InfosetId,
    action: Option<usize>,
) -> Result<f64> {
    let player = Player::One;
    let x = crate::efg::seq_of(profile.0, game)?;
    let mut tilt_vec = vec![0.0; x.values.len()];
    constraints.tilt_into(lambda, &x.values, &mut tilt_vec);
    tilted_value_closed_form(game, profile, player, &tilt_vec, infoset, action)
}
