//! Partially observed game records.
//!
//! Each record holds the probe player's own hand, the public action
//! sequence of the terminal, and the opponent's hand exactly when the
//! terminal was a showdown (folds never reveal cards).

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::efg::{BehavioralStrategy, NodeKind, Player};
use crate::error::{Error, Result};
use crate::games::{PokerGame, TerminalClass, ACTION_FOLD};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObservationRecord {
    pub own_hand: u8,
    /// Public node id of the terminal (s[z]).
    pub public_node: usize,
    /// Present iff the terminal was a showdown.
    pub opp_hand: Option<u8>,
}

#[derive(Debug, Clone)]
pub struct ObservationLog {
    pub probe_player: Player,
    pub records: Vec<ObservationRecord>,
    pub game_hash: String,
    pub probe_description: String,
}

impl ObservationLog {
    pub fn n(&self) -> usize {
        self.records.len()
    }

    /// One record per line: `own_hand public_seq opp_hand` with −1 for a
    /// hidden opponent hand; `#` header lines carry the game hash and probe.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("# ccfr-observation-log v1\n");
        let _ = writeln!(out, "# game_hash={}", self.game_hash);
        let _ = writeln!(out, "# probe_player={}", self.probe_player.index() + 1);
        let _ = writeln!(out, "# probe={}", self.probe_description);
        let _ = writeln!(out, "# n={}", self.records.len());
        for r in &self.records {
            let opp = r.opp_hand.map(|h| h as i64).unwrap_or(-1);
            let _ = writeln!(out, "{} {} {}", r.own_hand, r.public_node, opp);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<ObservationLog> {
        let mut game_hash = String::new();
        let mut probe_description = String::new();
        let mut probe_player = Player::One;
        let mut records = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(v) = rest.strip_prefix("game_hash=") {
                    game_hash = v.to_string();
                } else if let Some(v) = rest.strip_prefix("probe_player=") {
                    probe_player = match v {
                        "1" => Player::One,
                        "2" => Player::Two,
                        _ => return Err(Error::Parse(format!("bad probe_player `{v}`"))),
                    };
                } else if let Some(v) = rest.strip_prefix("probe=") {
                    probe_description = v.to_string();
                }
                continue;
            }
            let mut it = line.split_whitespace();
            let own: u8 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad record `{line}`")))?;
            let public: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad record `{line}`")))?;
            let opp: i64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad record `{line}`")))?;
            records.push(ObservationRecord {
                own_hand: own,
                public_node: public,
                opp_hand: if opp < 0 { None } else { Some(opp as u8) },
            });
        }
        Ok(ObservationLog {
            probe_player,
            records,
            game_hash,
            probe_description,
        })
    }
}

/// Uniform distribution over the non-fold actions of a probe infoset.
pub fn probe_strategy(game: &PokerGame, player: Player) -> BehavioralStrategy {
    let index = game.tree.seq_index(player).expect("poker has perfect recall");
    let mut probs = vec![0.0; index.num_seqs()];
    probs[0] = 1.0;
    for (id, info) in game.tree.infosets(player).iter().enumerate() {
        let non_fold: Vec<usize> = (0..info.actions.len())
            .filter(|&a| info.actions[a] != ACTION_FOLD)
            .collect();
        let p = 1.0 / non_fold.len() as f64;
        for a in non_fold {
            probs[index.layout.seq(id, a)] = p;
        }
    }
    BehavioralStrategy { player, probs }
}

/// Play `n` games of probe (uniform over non-fold actions) against the
/// target profile and record the partial observations. Deterministic for a
/// fixed seed.
pub fn simulate_observations(
    game: &PokerGame,
    target: (&BehavioralStrategy, &BehavioralStrategy),
    probe_player: Player,
    n: usize,
    seed: u64,
) -> Result<ObservationLog> {
    if n == 0 {
        return Err(Error::InvalidParam("need at least one game".into()));
    }
    let probe = probe_strategy(game, probe_player);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(n);
    let tree = &game.tree;
    for _ in 0..n {
        let mut node = tree.root();
        loop {
            let nd = tree.node(node);
            match &nd.kind {
                NodeKind::Terminal { .. } => break,
                NodeKind::Chance { probs } => {
                    node = nd.children[sample_index(&mut rng, probs)];
                }
                NodeKind::Decision { player, infoset } => {
                    let strat = if *player == probe_player {
                        &probe
                    } else if *player == Player::One {
                        target.0
                    } else {
                        target.1
                    };
                    let index = tree.seq_index(*player)?;
                    let range = index.layout.seq_range(*infoset);
                    let a = sample_index(&mut rng, &strat.probs[range]);
                    node = nd.children[a];
                }
            }
        }
        let hands = game.meta.node_hands[node];
        let own_hand = hands[probe_player.index()].expect("terminal after deals");
        let opp_hand = match game.meta.terminal_class[node] {
            Some(TerminalClass::Showdown) => hands[probe_player.other().index()],
            _ => None,
        };
        records.push(ObservationRecord {
            own_hand,
            public_node: game.meta.node_public[node],
            opp_hand,
        });
    }
    Ok(ObservationLog {
        probe_player,
        records,
        game_hash: tree.hash().to_string(),
        probe_description: "uniform-non-fold".into(),
    })
}

fn sample_index(rng: &mut ChaCha20Rng, weights: &[f64]) -> usize {
    let mut u: f64 = rng.gen_range(0.0..1.0);
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    weights.len() - 1
}
