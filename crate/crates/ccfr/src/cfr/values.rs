//! Counterfactual values as a standalone query.

use crate::cfr::sweep::{sweep_tree, SweepScratch};
use crate::efg::{BehavioralStrategy, GameTree, InfosetId, Player};
use crate::error::{Error, Result};

/// v(I,σ,a) when `action` is given, else the infoset value
/// v(I,σ) = Σ_a σ(I,a)·v(I,σ,a), both from the acting player's perspective.
pub fn counterfactual_value(
    game: &GameTree,
    profile: (&BehavioralStrategy, &BehavioralStrategy),
    player: Player,
    infoset: InfosetId,
    action: Option<usize>,
) -> Result<f64> {
    let index = game.seq_index(player)?;
    if infoset >= index.layout.sets.len() {
        return Err(Error::UnknownInfoset(format!("#{infoset}")));
    }
    let mut values = vec![0.0; index.num_seqs()];
    let mut scratch = SweepScratch::default();
    sweep_tree(
        game,
        player,
        [&profile.0.probs, &profile.1.probs],
        None,
        &mut values,
        &mut scratch,
    );
    match action {
        Some(a) => {
            let slot = index.layout.slot(infoset);
            if a >= slot.actions {
                return Err(Error::UnknownAction {
                    infoset: format!("#{infoset}"),
                    action: format!("#{a}"),
                });
            }
            Ok(values[slot.first_seq + a])
        }
        None => {
            let own = match player {
                Player::One => &profile.0.probs,
                Player::Two => &profile.1.probs,
            };
            Ok(index
                .layout
                .seq_range(infoset)
                .map(|s| own[s] * values[s])
                .sum())
        }
    }
}
