//! Vanilla CFR driver state.

use crate::cfr::regret::regret_match_into;
use crate::cfr::sweep::SweepScratch;
use crate::cfr::CfrGame;
use crate::efg::{Player, SeqLayout, SequenceFormStrategy};
use crate::error::{Error, Result};

/// Per-player regret-matching state: cumulative regrets R(I,a), the current
/// behavioral strategy, and the cumulative realization sum Σ_t x^t (which is
/// simultaneously the sequence-weighted strategy sum Σ_t π_i(I)σ^t(I,a)).
#[derive(Debug, Clone)]
pub struct PlayerState {
    pub regrets: Vec<f64>,
    pub strat: Vec<f64>,
    pub real_sum: Vec<f64>,
    pub(crate) values: Vec<f64>,
    pub(crate) realization: Vec<f64>,
}

impl PlayerState {
    pub fn new(layout: &SeqLayout) -> Self {
        let mut strat = vec![0.0; layout.num_seqs];
        strat[0] = 1.0;
        for slot in &layout.sets {
            let u = 1.0 / slot.actions as f64;
            for s in slot.first_seq..slot.first_seq + slot.actions {
                strat[s] = u;
            }
        }
        PlayerState {
            regrets: vec![0.0; layout.num_seqs],
            strat,
            real_sum: vec![0.0; layout.num_seqs],
            values: vec![0.0; layout.num_seqs],
            realization: vec![0.0; layout.num_seqs],
        }
    }

    /// Accumulate regrets from the values buffer (ṽ(I,a) per sequence) and
    /// re-derive the current strategy by regret matching.
    pub(crate) fn apply_values(&mut self, layout: &SeqLayout) {
        for slot in &layout.sets {
            let range = slot.first_seq..slot.first_seq + slot.actions;
            let mut set_value = 0.0;
            for s in range.clone() {
                set_value += self.strat[s] * self.values[s];
            }
            for s in range.clone() {
                self.regrets[s] += self.values[s] - set_value;
            }
            let (r, o) = (&self.regrets[range.clone()], &mut self.strat[range]);
            regret_match_into(r, o);
        }
    }

}

/// Normalize cumulative realization sums into a flat behavioral strategy
/// (uniform at never-reached infosets).
pub fn normalize_to_behavioral(layout: &SeqLayout, sums: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; layout.num_seqs];
    out[0] = 1.0;
    for slot in &layout.sets {
        let range = slot.first_seq..slot.first_seq + slot.actions;
        let mass: f64 = sums[range.clone()].iter().sum();
        if mass > 0.0 {
            for s in range {
                out[s] = sums[s] / mass;
            }
        } else {
            let u = 1.0 / slot.actions as f64;
            for s in range {
                out[s] = u;
            }
        }
    }
    out
}

/// Alternating-update vanilla CFR: each iteration updates player 2 from the
/// previous profile, then player 1 against the refreshed player 2, then
/// accumulates both averages.
pub struct CfrRun<'a, G: CfrGame> {
    game: &'a G,
    pub players: [PlayerState; 2],
    scratch: SweepScratch,
    t: usize,
}

impl<'a, G: CfrGame> CfrRun<'a, G> {
    pub fn new(game: &'a G) -> Self {
        CfrRun {
            players: [
                PlayerState::new(game.layout(Player::One)),
                PlayerState::new(game.layout(Player::Two)),
            ],
            scratch: SweepScratch::default(),
            game,
            t: 0,
        }
    }

    pub fn game(&self) -> &'a G {
        self.game
    }

    pub fn iterations(&self) -> usize {
        self.t
    }

    /// One regret/strategy update for `player` against the current profile.
    /// Returns the root value of the sweep from that player's perspective.
    pub fn update_player(&mut self, player: Player) -> f64 {
        let (a, b) = self.players.split_at_mut(1);
        let (own, other) = match player {
            Player::One => (&mut a[0], &b[0]),
            Player::Two => (&mut b[0], &a[0]),
        };
        let strats = match player {
            Player::One => [own.strat.as_slice(), other.strat.as_slice()],
            Player::Two => [other.strat.as_slice(), own.strat.as_slice()],
        };
        let root = self
            .game
            .sweep_values(player, strats, None, &mut own.values, &mut self.scratch);
        own.apply_values(self.game.layout(player));
        root
    }

    /// One full iteration in algorithm order: player 2, player 1, averages.
    pub fn iterate(&mut self) {
        self.update_player(Player::Two);
        self.update_player(Player::One);
        self.accumulate_averages();
    }

    pub fn run(&mut self, iterations: usize) {
        for _ in 0..iterations {
            self.iterate();
        }
    }

    fn accumulate_averages(&mut self) {
        for p in [Player::One, Player::Two] {
            let st = &mut self.players[p.index()];
            self.game.realization_into(p, &st.strat, &mut st.realization);
            for (s, r) in st.real_sum.iter_mut().zip(&st.realization) {
                *s += r;
            }
        }
        self.t += 1;
    }

    pub fn current(&self, player: Player) -> &[f64] {
        &self.players[player.index()].strat
    }

    /// Average realization plan x̄^T = (1/T) Σ_t x^t.
    pub fn average_realization(&self, player: Player) -> Result<Vec<f64>> {
        if self.t == 0 {
            return Err(Error::InvalidParam("no iterations run".into()));
        }
        let inv = 1.0 / self.t as f64;
        let mut out: Vec<f64> = self.players[player.index()]
            .real_sum
            .iter()
            .map(|v| v * inv)
            .collect();
        out[0] = 1.0;
        Ok(out)
    }

    pub fn average_sequence_strategy(&self, player: Player) -> Result<SequenceFormStrategy> {
        Ok(SequenceFormStrategy::from_values(
            player,
            self.average_realization(player)?,
        ))
    }

    /// Average behavioral strategy (normalized strategy sums).
    pub fn average_behavioral(&self, player: Player) -> Result<Vec<f64>> {
        if self.t == 0 {
            return Err(Error::InvalidParam("no iterations run".into()));
        }
        Ok(normalize_to_behavioral(
            self.game.layout(player),
            &self.players[player.index()].real_sum,
        ))
    }
}

/// One checkpoint of a self-play convergence log.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub iteration: usize,
    pub exploitability: f64,
    /// Player-1 value of the average profile.
    pub value: f64,
    pub wall_seconds: f64,
}

/// Run vanilla CFR on a tree with exploitability measured at exponentially
/// spaced checkpoints.
pub fn convergence_log(
    game: &crate::efg::GameTree,
    iterations: usize,
    per_decade: u32,
) -> Result<Vec<ConvergenceRow>> {
    let started = std::time::Instant::now();
    let mut run = CfrRun::new(game);
    let mut rows = Vec::new();
    for t in crate::cfr::checkpoints(iterations, per_decade) {
        run.run(t - run.iterations());
        let b1 = crate::efg::BehavioralStrategy {
            player: Player::One,
            probs: run.average_behavioral(Player::One)?,
        };
        let b2 = crate::efg::BehavioralStrategy {
            player: Player::Two,
            probs: run.average_behavioral(Player::Two)?,
        };
        rows.push(ConvergenceRow {
            iteration: t,
            exploitability: crate::cfr::exploitability(game, (&b1, &b2))?,
            value: game.expected_value([&b1.probs, &b2.probs]),
            wall_seconds: started.elapsed().as_secs_f64(),
        });
    }
    Ok(rows)
}

/// CSV rendering of a convergence log (includes the wall-time column, so
/// the output is not byte-reproducible across runs).
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("iteration,exploitability,value,wall_seconds\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.iteration, r.exploitability, r.value, r.wall_seconds
        ));
    }
    out
}
