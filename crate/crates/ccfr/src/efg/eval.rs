//! Reach probabilities and expected utility.

use crate::efg::strategy::{BehavioralStrategy, SequenceFormStrategy};
use crate::efg::tree::{GameTree, NodeId, NodeKind, Player};
use crate::error::{Error, Result};

/// Decomposition of a node's reach probability into player and chance
/// contributions; `total = p1 * p2 * chance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reach {
    pub total: f64,
    pub p1: f64,
    pub p2: f64,
    pub chance: f64,
}

/// Reach probability of `node` under a behavioral profile, with the
/// per-player and chance factors.
pub fn reach_probability(
    game: &GameTree,
    profile: (&BehavioralStrategy, &BehavioralStrategy),
    node: NodeId,
) -> Result<Reach> {
    let mut r = Reach {
        total: 1.0,
        p1: 1.0,
        p2: 1.0,
        chance: 1.0,
    };
    let mut cur = node;
    while let Some((parent, action)) = game.node(cur).parent {
        match &game.node(parent).kind {
            NodeKind::Chance { probs } => r.chance *= probs[action],
            NodeKind::Decision { player, infoset } => {
                let (strat, factor) = match player {
                    Player::One => (profile.0, &mut r.p1),
                    Player::Two => (profile.1, &mut r.p2),
                };
                let seq = game.seq_index(*player)?.layout.seq(*infoset, action);
                *factor *= strat.probs[seq];
            }
            NodeKind::Terminal { .. } => unreachable!("terminal cannot be a parent"),
        }
        cur = parent;
    }
    r.total = r.p1 * r.p2 * r.chance;
    Ok(r)
}

/// Expected utility for player 1 under sequence-form strategies:
/// Σ_z π_c(z) · x_z · y_z · u(z). Bilinear in (x, y).
pub fn expected_utility(
    x: &SequenceFormStrategy,
    y: &SequenceFormStrategy,
    game: &GameTree,
) -> Result<f64> {
    if x.player != Player::One || y.player != Player::Two {
        return Err(Error::InvalidParam(
            "expected_utility takes (player-1 x, player-2 y)".into(),
        ));
    }
    let s1 = game.seq_index(Player::One)?;
    let s2 = game.seq_index(Player::Two)?;
    let mut total = 0.0;
    for (i, &z) in game.terminals().iter().enumerate() {
        let u = game.utility(z);
        if u != 0.0 {
            total += game.terminal_chance()[i]
                * x.values[s1.node_seq[z]]
                * y.values[s2.node_seq[z]]
                * u;
        }
    }
    Ok(total)
}

/// Expected player-1 utility of a behavioral profile, evaluated by a forward
/// pass over the arena.
pub fn expected_utility_behavioral(
    profile: (&BehavioralStrategy, &BehavioralStrategy),
    game: &GameTree,
) -> Result<f64> {
    let s1 = game.seq_index(Player::One)?;
    let s2 = game.seq_index(Player::Two)?;
    let mut reach = vec![0.0; game.num_nodes()];
    reach[game.root()] = 1.0;
    let mut total = 0.0;
    for &id in game.preorder() {
        let r = reach[id];
        if r == 0.0 {
            continue;
        }
        let node = game.node(id);
        match &node.kind {
            NodeKind::Terminal { utility } => total += r * utility,
            NodeKind::Chance { probs } => {
                for (a, &c) in node.children.iter().enumerate() {
                    reach[c] = r * probs[a];
                }
            }
            NodeKind::Decision { player, infoset } => {
                let (strat, index) = match player {
                    Player::One => (profile.0, s1),
                    Player::Two => (profile.1, s2),
                };
                for (a, &c) in node.children.iter().enumerate() {
                    reach[c] = r * strat.probs[index.layout.seq(*infoset, a)];
                }
            }
        }
    }
    Ok(total)
}
