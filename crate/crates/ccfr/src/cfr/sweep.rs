//! Infoset-level value sweeps over a game tree.
//!
//! One sweep computes, for the updating player p:
//!
//! 1. a forward pass over the arena collecting π_{−p}(h), the opponent and
//!    chance reach of every node;
//! 2. per-sequence accumulators seeded with Σ_z π_{−p}(z)·u_p(z) over the
//!    terminals whose last own sequence is (I,a);
//! 3. a bottom-up pass over the player's infosets: the action value is the
//!    accumulator minus the tilt, the infoset value mixes action values with
//!    the current strategy and is added to the parent sequence's accumulator.
//!
//! The root accumulator then holds the (tilted) expected utility. Because
//! successor infoset values enter parents untilted by opponent or chance
//! reach, tilts propagate weighted only by the player's own future reach.

use crate::efg::{GameTree, NodeKind, Player, SequenceIndex};

/// Reusable buffers for sweeps (per-node reach, per-sequence accumulators).
#[derive(Debug, Default, Clone)]
pub struct SweepScratch {
    pub(crate) reach: Vec<f64>,
    pub(crate) acc: Vec<f64>,
}

impl SweepScratch {
    pub fn ensure(&mut self, nodes: usize, seqs: usize) {
        if self.reach.len() < nodes {
            self.reach.resize(nodes, 0.0);
        }
        if self.acc.len() < seqs {
            self.acc.resize(seqs, 0.0);
        }
    }
}

/// Opponent-and-chance reach of every node under the given flat behavioral
/// profile, written into `reach`.
pub(crate) fn opponent_reach_into(
    game: &GameTree,
    player: Player,
    strats: [&[f64]; 2],
    reach: &mut [f64],
) {
    reach[game.root()] = 1.0;
    for &id in game.preorder() {
        let r = reach[id];
        let node = game.node(id);
        match &node.kind {
            NodeKind::Terminal { .. } => {}
            NodeKind::Chance { probs } => {
                for (a, &c) in node.children.iter().enumerate() {
                    reach[c] = r * probs[a];
                }
            }
            NodeKind::Decision { player: q, infoset } => {
                if *q == player {
                    for &c in &node.children {
                        reach[c] = r;
                    }
                } else {
                    let index = game.seq_index(*q).expect("solver requires perfect recall");
                    let strat = strats[q.index()];
                    for (a, &c) in node.children.iter().enumerate() {
                        reach[c] = r * strat[index.layout.seq(*infoset, a)];
                    }
                }
            }
        }
    }
}

/// Core sweep; see module docs. Fills `values[seq]` with ṽ(I,a) and returns
/// the root value ṽ(∅).
pub(crate) fn sweep_tree(
    game: &GameTree,
    player: Player,
    strats: [&[f64]; 2],
    tilt: Option<&[f64]>,
    values: &mut [f64],
    scratch: &mut SweepScratch,
) -> f64 {
    let index = game.seq_index(player).expect("solver requires perfect recall");
    scratch.ensure(game.num_nodes(), index.num_seqs());
    opponent_reach_into(game, player, strats, &mut scratch.reach);

    // Chance reach is already folded into π_{−p}(z).
    let acc = &mut scratch.acc[..index.num_seqs()];
    acc.fill(0.0);
    let sign = player.sign();
    for &z in game.terminals() {
        let u = game.utility(z);
        if u != 0.0 {
            acc[index.node_seq[z]] += scratch.reach[z] * sign * u;
        }
    }

    let own = strats[player.index()];
    for &infoset in &index.reverse_topo {
        let range = index.layout.seq_range(infoset);
        let mut v_set = 0.0;
        for s in range.clone() {
            let mut v = acc[s];
            if let Some(t) = tilt {
                v -= t[s];
            }
            values[s] = v;
            v_set += own[s] * v;
        }
        acc[index.parent_seq[infoset]] += v_set;
    }
    acc[0]
}

/// Maximize Σ_s rewards[s]·x_s over the player's sequence polytope by
/// bottom-up dynamic programming. `rewards` is consumed as the accumulator;
/// `rewards[0]` contributes unconditionally. When `pure_out` is given it
/// receives the maximizing pure strategy (flat behavioral form, ties broken
/// toward the lowest action index).
pub(crate) fn maximize_over_sequences(
    index: &SequenceIndex,
    rewards: &mut [f64],
    mut pure_out: Option<&mut [f64]>,
) -> f64 {
    if let Some(out) = pure_out.as_deref_mut() {
        out.fill(0.0);
        out[0] = 1.0;
    }
    for &infoset in &index.reverse_topo {
        let range = index.layout.seq_range(infoset);
        let mut best = f64::NEG_INFINITY;
        let mut best_s = range.start;
        for s in range {
            if rewards[s] > best {
                best = rewards[s];
                best_s = s;
            }
        }
        if let Some(out) = pure_out.as_deref_mut() {
            out[best_s] = 1.0;
        }
        rewards[index.parent_seq[infoset]] += best;
    }
    rewards[0]
}

/// Expected player-1 utility of a flat behavioral profile (forward pass).
pub(crate) fn expected_value_tree(game: &GameTree, strats: [&[f64]; 2]) -> f64 {
    let s1 = game.seq_index(Player::One).expect("perfect recall");
    let s2 = game.seq_index(Player::Two).expect("perfect recall");
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
                let index = if *player == Player::One { s1 } else { s2 };
                let strat = strats[player.index()];
                for (a, &c) in node.children.iter().enumerate() {
                    reach[c] = r * strat[index.layout.seq(*infoset, a)];
                }
            }
        }
    }
    total
}

impl crate::cfr::CfrGame for GameTree {
    fn layout(&self, player: Player) -> &crate::efg::SeqLayout {
        &self
            .seq_index(player)
            .expect("solver requires perfect recall")
            .layout
    }

    fn realization_into(&self, player: Player, strat: &[f64], out: &mut [f64]) {
        crate::efg::seq_of_into(strat, self, player, out).expect("perfect recall");
    }

    fn sweep_values(
        &self,
        player: Player,
        strats: [&[f64]; 2],
        tilt: Option<&[f64]>,
        values: &mut [f64],
        scratch: &mut SweepScratch,
    ) -> f64 {
        sweep_tree(self, player, strats, tilt, values, scratch)
    }

    fn best_response_value(&self, player: Player, opponent: &[f64]) -> f64 {
        let index = self.seq_index(player).expect("perfect recall");
        // Own entries of the profile are never read by the forward pass for
        // `player`, so the opponent vector can fill both slots.
        let mut reach = vec![0.0; self.num_nodes()];
        opponent_reach_into(self, player, [opponent, opponent], &mut reach);
        let mut rewards = vec![0.0; index.num_seqs()];
        let sign = player.sign();
        for &z in self.terminals() {
            let u = self.utility(z);
            if u != 0.0 {
                rewards[index.node_seq[z]] += reach[z] * sign * u;
            }
        }
        maximize_over_sequences(index, &mut rewards, None)
    }

    fn expected_value(&self, strats: [&[f64]; 2]) -> f64 {
        expected_value_tree(self, strats)
    }

    fn utility_range(&self) -> (f64, f64) {
        GameTree::utility_range(self)
    }

    fn reach_weight_bound(&self, player: Player) -> f64 {
        let index = self.seq_index(player).expect("perfect recall");
        let mut acc = vec![0.0f64; index.num_seqs()];
        for &infoset in &index.reverse_topo {
            let mut best = 0.0f64;
            for s in index.layout.seq_range(infoset) {
                best = best.max(acc[s]);
            }
            acc[index.parent_seq[infoset]] += 1.0 + best;
        }
        acc[0]
    }

    fn maximize_linear(&self, player: Player, coeffs: &[f64]) -> f64 {
        let index = self.seq_index(player).expect("perfect recall");
        let mut rewards = coeffs.to_vec();
        maximize_over_sequences(index, &mut rewards, None)
    }

    fn random_strategy(&self, player: Player, rng: &mut dyn rand::RngCore) -> Vec<f64> {
        crate::efg::BehavioralStrategy::random(
            &self.seq_index(player).expect("perfect recall").layout,
            player,
            rng,
        )
        .probs
    }
}
