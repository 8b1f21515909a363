//! Solver view of the transit game.
//!
//! Information sets are (cell, time) per player — history is not remembered.
//! In place of a tree sweep, values come from forward propagation of each
//! player's cell occupancy and a backward pass of expected values: the
//! opponent's occupancy supplies per-step rewards, own dynamics supply the
//! continuation. The realization vector is the occupancy measure over
//! (cell, time, action) triples, which is the polytope the risk constraint
//! is linear over. The patroller is player 1 (the maximizer, and the
//! constrained player); the evader is player 2.

use crate::cfr::{CfrGame, SweepScratch};
use crate::efg::{Player, SeqId, SeqLayout, SetSlot};
use crate::games::transit::TransitGame;

#[derive(Debug, Clone)]
pub struct NfgssView<'a> {
    pub game: &'a TransitGame,
    layout: SeqLayout,
    /// Per sequence id >= 1: (cell, time, action index).
    seq_info: Vec<(usize, usize, usize)>,
}

/// Forward-propagated occupancy of one player.
#[derive(Debug, Clone)]
pub struct OccupancyData {
    /// occ[t * cells + s]: probability of being (unescaped) at s at time t,
    /// for t in 0..=horizon.
    pub occ: Vec<f64>,
    /// Escape inflow per snapshot t (zero for the patroller).
    pub escape_inflow: Vec<f64>,
    /// Unescaped mass per snapshot t (1 for the patroller).
    pub unescaped: Vec<f64>,
}

impl TransitGame {
    pub fn nfgss_view(&self) -> NfgssView<'_> {
        let mut sets = Vec::with_capacity(self.cells * self.horizon);
        let mut seq_info = vec![(usize::MAX, 0, 0)];
        let mut next = 1usize;
        for t in 0..self.horizon {
            for cell in 0..self.cells {
                let actions = self.num_actions(cell);
                sets.push(SetSlot {
                    first_seq: next,
                    actions,
                });
                for a in 0..actions {
                    seq_info.push((cell, t, a));
                }
                next += actions;
            }
        }
        NfgssView {
            game: self,
            layout: SeqLayout {
                num_seqs: next,
                sets,
            },
            seq_info,
        }
    }
}

impl<'a> NfgssView<'a> {
    pub fn infoset(&self, cell: usize, t: usize) -> usize {
        t * self.game.cells + cell
    }

    pub fn seq(&self, cell: usize, t: usize, action: usize) -> SeqId {
        self.layout.seq(self.infoset(cell, t), action)
    }

    pub fn seq_info(&self, seq: SeqId) -> (usize, usize, usize) {
        self.seq_info[seq]
    }

    pub fn seq_layout(&self) -> &SeqLayout {
        &self.layout
    }

    fn start_occupancy(&self, player: Player) -> Vec<f64> {
        let g = self.game;
        let mut occ0 = vec![0.0; g.cells];
        match player {
            Player::One => occ0[g.base] = 1.0,
            Player::Two => {
                for &(cell, p) in &g.evader_start {
                    occ0[cell] = p;
                }
            }
        }
        occ0
    }

    /// Forward occupancy under a flat behavioral strategy. Evader mass
    /// reaching the east column converts to escape inflow and leaves the
    /// grid.
    pub fn occupancy(&self, player: Player, strat: &[f64]) -> OccupancyData {
        let g = self.game;
        let n = g.cells;
        let mut occ = vec![0.0; (g.horizon + 1) * n];
        let mut escape_inflow = vec![0.0; g.horizon + 1];
        let mut unescaped = vec![0.0; g.horizon + 1];
        occ[..n].copy_from_slice(&self.start_occupancy(player));
        unescaped[0] = 1.0;
        let evader = player == Player::Two;
        for t in 0..g.horizon {
            let (cur, next) = occ.split_at_mut((t + 1) * n);
            let cur = &cur[t * n..];
            let next = &mut next[..n];
            for cell in 0..n {
                let mass = cur[cell];
                if mass == 0.0 {
                    continue;
                }
                for a in 0..g.num_actions(cell) {
                    let flow = mass * strat[self.seq(cell, t, a)];
                    if flow == 0.0 {
                        continue;
                    }
                    for (dest, p) in g.kernel(cell, a) {
                        if p == 0.0 {
                            continue;
                        }
                        if evader && g.is_east(dest) {
                            escape_inflow[t + 1] += flow * p;
                        } else {
                            next[dest] += flow * p;
                        }
                    }
                }
            }
            unescaped[t + 1] = next.iter().sum();
        }
        if !evader {
            for u in unescaped.iter_mut() {
                *u = 1.0;
            }
        }
        OccupancyData {
            occ,
            escape_inflow,
            unescaped,
        }
    }

    /// Backward value pass for `player`. Fills `values[seq]` with the
    /// (tilted) expected value-to-go of each (cell, t, action) and returns
    /// the start-weighted root value from `player`'s perspective. When
    /// `maximize` is set, infoset values take the best action instead of the
    /// strategy mixture (exact Markov best response).
    fn backward(
        &self,
        player: Player,
        own: Option<&[f64]>,
        opp: &OccupancyData,
        tilt: Option<&[f64]>,
        values: &mut [f64],
        maximize: bool,
    ) -> f64 {
        let g = self.game;
        let n = g.cells;
        let mut v_next = vec![0.0; n];
        let mut v_cur = vec![0.0; n];
        // Patroller reward constants per snapshot: step costs collected from
        // the evader plus the (negative) escape payout, position-independent.
        let evader = player == Player::Two;
        for t in (0..g.horizon).rev() {
            let const_t = if evader {
                0.0
            } else {
                g.step_cost * opp.unescaped[t + 1]
                    - g.escape_reward * opp.escape_inflow[t + 1]
            };
            let opp_occ = &opp.occ[(t + 1) * n..(t + 2) * n];
            for cell in 0..n {
                let mut best = f64::NEG_INFINITY;
                let mut mix = 0.0;
                for a in 0..g.num_actions(cell) {
                    let s = self.seq(cell, t, a);
                    let mut q = 0.0;
                    for (dest, p) in g.kernel(cell, a) {
                        if p == 0.0 {
                            continue;
                        }
                        q += p * if evader {
                            if g.is_east(dest) {
                                g.escape_reward
                            } else {
                                -g.step_cost - g.encounter_penalty * opp_occ[dest]
                                    + v_next[dest]
                            }
                        } else {
                            g.encounter_penalty * opp_occ[dest] + v_next[dest]
                        };
                    }
                    if !evader {
                        q += const_t;
                    }
                    if let Some(tl) = tilt {
                        q -= tl[s];
                    }
                    values[s] = q;
                    if maximize {
                        best = best.max(q);
                    } else {
                        mix += own.expect("strategy required")[s] * q;
                    }
                }
                v_cur[cell] = if maximize { best } else { mix };
            }
            std::mem::swap(&mut v_next, &mut v_cur);
        }
        let start = self.start_occupancy(player);
        start.iter().zip(&v_next).map(|(s, v)| s * v).sum()
    }
}

impl<'a> CfrGame for NfgssView<'a> {
    fn layout(&self, _player: Player) -> &SeqLayout {
        &self.layout
    }

    fn realization_into(&self, player: Player, strat: &[f64], out: &mut [f64]) {
        let g = self.game;
        let data = self.occupancy(player, strat);
        out[0] = 1.0;
        for t in 0..g.horizon {
            let occ = &data.occ[t * g.cells..(t + 1) * g.cells];
            for cell in 0..g.cells {
                for a in 0..g.num_actions(cell) {
                    let s = self.seq(cell, t, a);
                    out[s] = occ[cell] * strat[s];
                }
            }
        }
    }

    fn sweep_values(
        &self,
        player: Player,
        strats: [&[f64]; 2],
        tilt: Option<&[f64]>,
        values: &mut [f64],
        _scratch: &mut SweepScratch,
    ) -> f64 {
        let opp = self.occupancy(player.other(), strats[player.other().index()]);
        self.backward(
            player,
            Some(strats[player.index()]),
            &opp,
            tilt,
            values,
            false,
        )
    }

    fn best_response_value(&self, player: Player, opponent: &[f64]) -> f64 {
        let opp = self.occupancy(player.other(), opponent);
        let mut values = vec![0.0; self.layout.num_seqs];
        self.backward(player, None, &opp, None, &mut values, true)
    }

    fn expected_value(&self, strats: [&[f64]; 2]) -> f64 {
        let g = self.game;
        let pat = self.occupancy(Player::One, strats[0]);
        let eva = self.occupancy(Player::Two, strats[1]);
        let mut evader_value = 0.0;
        for t in 1..=g.horizon {
            let pe = &eva.occ[t * g.cells..(t + 1) * g.cells];
            let pp = &pat.occ[t * g.cells..(t + 1) * g.cells];
            let co_location: f64 = pe.iter().zip(pp).map(|(a, b)| a * b).sum();
            evader_value += g.escape_reward * eva.escape_inflow[t]
                - g.step_cost * eva.unescaped[t]
                - g.encounter_penalty * co_location;
        }
        -evader_value
    }

    fn utility_range(&self) -> (f64, f64) {
        let g = self.game;
        // Conservative evader range: fastest escape (cols−1 moves, step
        // costs before it, no encounters) up to never escaping while
        // co-located every step.
        let max_evader = g.escape_reward - g.step_cost * (g.cols as f64 - 2.0);
        let min_evader = -(g.step_cost + g.encounter_penalty) * g.horizon as f64;
        (-max_evader, -min_evader)
    }

    fn reach_weight_bound(&self, _player: Player) -> f64 {
        // Occupancy sums to at most 1 per epoch, so Σ_I π(I) <= d exactly.
        self.game.horizon as f64
    }

    fn maximize_linear(&self, player: Player, coeffs: &[f64]) -> f64 {
        let g = self.game;
        let n = g.cells;
        let evader = player == Player::Two;
        let mut w_next = vec![0.0; n];
        let mut w_cur = vec![0.0; n];
        for t in (0..g.horizon).rev() {
            for cell in 0..n {
                let mut best = f64::NEG_INFINITY;
                for a in 0..g.num_actions(cell) {
                    let mut q = coeffs[self.seq(cell, t, a)];
                    for (dest, p) in g.kernel(cell, a) {
                        if p == 0.0 || (evader && g.is_east(dest)) {
                            continue;
                        }
                        q += p * w_next[dest];
                    }
                    best = best.max(q);
                }
                w_cur[cell] = best;
            }
            std::mem::swap(&mut w_next, &mut w_cur);
        }
        let start = self.start_occupancy(player);
        coeffs[0] + start.iter().zip(&w_next).map(|(s, v)| s * v).sum::<f64>()
    }

    fn random_strategy(&self, player: Player, rng: &mut dyn rand::RngCore) -> Vec<f64> {
        crate::efg::BehavioralStrategy::random(&self.layout, player, rng).probs
    }
}
