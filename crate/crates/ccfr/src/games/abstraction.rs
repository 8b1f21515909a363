//! Rank-bucket information abstractions for the poker games.
//!
//! An abstraction name lists per-round bucket rules separated by `/`. The
//! first round groups ranks: `JQ.K` merges jacks and queens into one bucket
//! and keeps kings separate. Later rounds may use `pair.nopair`, which
//! buckets hands by whether the private card pairs the public card. Bucket
//! sequences are remembered across rounds, so the abstract game keeps
//! perfect recall.

use crate::cfr::CfrRun;
use crate::efg::{BehavioralStrategy, GameTree, GameTreeBuilder, NodeKind, PLAYERS};
use crate::error::{Error, Result};
use crate::games::poker::{InfosetDetail, PokerGame};

#[derive(Debug, Clone)]
enum RoundBuckets {
    RankGroups(Vec<String>),
    PairNoPair,
}

#[derive(Debug)]
pub struct PokerAbstraction {
    pub name: String,
    pub abstract_game: GameTree,
    /// Per player: full-game infoset id → abstract infoset id.
    pub map: [Vec<usize>; 2],
}

fn parse_name(name: &str) -> Result<Vec<RoundBuckets>> {
    let mut out = Vec::new();
    for round_spec in name.split('/') {
        if round_spec == "pair.nopair" {
            out.push(RoundBuckets::PairNoPair);
        } else {
            let groups: Vec<String> = round_spec.split('.').map(|s| s.to_string()).collect();
            if groups.iter().any(|g| g.is_empty()) {
                return Err(Error::UnknownAbstraction(name.to_string()));
            }
            out.push(RoundBuckets::RankGroups(groups));
        }
    }
    Ok(out)
}

fn rank_letter(game: &PokerGame, rank: u8) -> char {
    game.rules
        .deck
        .iter()
        .find(|c| c.rank == rank)
        .map(|c| c.label.chars().next().unwrap())
        .expect("rank present in deck")
}

fn bucket(game: &PokerGame, rounds: &[RoundBuckets], detail: &InfosetDetail, round: usize) -> Result<String> {
    let rule = rounds
        .get(round)
        .ok_or_else(|| Error::UnknownAbstraction("missing round spec".into()))?;
    let rank = game.rules.deck[detail.card as usize].rank;
    match rule {
        RoundBuckets::RankGroups(groups) => {
            let letter = rank_letter(game, rank);
            groups
                .iter()
                .find(|g| g.contains(letter))
                .cloned()
                .ok_or_else(|| Error::UnknownAbstraction(format!("rank {letter} unassigned")))
        }
        RoundBuckets::PairNoPair => {
            let public = *detail
                .publics
                .get(round - 1)
                .ok_or_else(|| Error::UnknownAbstraction("pair.nopair before a public card".into()))?;
            let public_rank = game.rules.deck[public as usize].rank;
            Ok(if rank == public_rank { "pair" } else { "nopair" }.to_string())
        }
    }
}

/// Abstract infoset key: bucket sequence for rounds 0..=r plus the betting
/// string (which carries no card identities).
fn abstract_key(
    game: &PokerGame,
    rounds: &[RoundBuckets],
    detail: &InfosetDetail,
) -> Result<String> {
    let mut buckets = Vec::with_capacity(detail.round + 1);
    for r in 0..=detail.round {
        buckets.push(bucket(game, rounds, detail, r)?);
    }
    Ok(format!("{}:{}", buckets.join("."), detail.betting))
}

pub fn build_poker_abstraction(game: &PokerGame, name: &str) -> Result<PokerAbstraction> {
    let rounds = parse_name(name)?;
    if rounds.len() != game.rules.rounds {
        return Err(Error::UnknownAbstraction(format!(
            "`{name}` specifies {} rounds, game has {}",
            rounds.len(),
            game.rules.rounds
        )));
    }

    // Abstract keys per full infoset.
    let mut keys: [Vec<String>; 2] = [Vec::new(), Vec::new()];
    for p in PLAYERS {
        for detail in &game.meta.infoset_detail[p.index()] {
            keys[p.index()].push(abstract_key(game, &rounds, detail)?);
        }
    }

    // Rebuild the arena with re-keyed decision nodes; node ids are preserved.
    let tree = &game.tree;
    let mut b = GameTreeBuilder::new();
    for id in 0..tree.num_nodes() {
        let node = tree.node(id);
        match &node.kind {
            NodeKind::Terminal { utility } => {
                b.terminal(*utility);
            }
            NodeKind::Chance { probs } => {
                b.chance(
                    probs
                        .iter()
                        .copied()
                        .zip(node.children.iter().copied())
                        .collect(),
                )?;
            }
            NodeKind::Decision { player, infoset } => {
                let info = tree.infoset(*player, *infoset);
                b.decision(
                    *player,
                    &keys[player.index()][*infoset],
                    &info.actions,
                    node.children.clone(),
                )?;
            }
        }
    }
    let abstract_game = b.finish(tree.root())?;
    for p in PLAYERS {
        if !abstract_game.has_perfect_recall(p) {
            return Err(Error::UnknownAbstraction(format!(
                "`{name}` breaks perfect recall for {p:?}"
            )));
        }
    }

    // Map full infoset ids through a shared member node.
    let mut map: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for p in PLAYERS {
        for info in tree.infosets(p) {
            let node = info.nodes[0];
            match abstract_game.node(node).kind {
                NodeKind::Decision { infoset, .. } => map[p.index()].push(infoset),
                _ => unreachable!("node kinds preserved"),
            }
        }
    }

    Ok(PokerAbstraction {
        name: name.to_string(),
        abstract_game,
        map,
    })
}

/// Leduc entry point; recognizes `JQ.K/pair.nopair`.
pub fn build_leduc_abstraction(game: &PokerGame, name: &str) -> Result<PokerAbstraction> {
    if game.rules.rounds != 2 {
        return Err(Error::UnknownAbstraction(
            "leduc abstraction needs a two-round game".into(),
        ));
    }
    build_poker_abstraction(game, name)
}

/// Kuhn entry point; recognizes single-round names such as `JQ.K`.
pub fn build_kuhn_abstraction(game: &PokerGame, name: &str) -> Result<PokerAbstraction> {
    if game.rules.rounds != 1 {
        return Err(Error::UnknownAbstraction(
            "kuhn abstraction needs a one-round game".into(),
        ));
    }
    build_poker_abstraction(game, name)
}

/// Lift an abstract behavioral strategy to the full game: every full infoset
/// plays its abstract bucket's distribution.
pub fn lift_behavioral(
    abstraction: &PokerAbstraction,
    game: &PokerGame,
    strat: &BehavioralStrategy,
) -> Result<BehavioralStrategy> {
    let p = strat.player;
    let full = game.tree.seq_index(p)?;
    let abs = abstraction.abstract_game.seq_index(p)?;
    let mut probs = vec![0.0; full.num_seqs()];
    probs[0] = 1.0;
    for (full_id, &abs_id) in abstraction.map[p.index()].iter().enumerate() {
        let n = full.layout.slot(full_id).actions;
        debug_assert_eq!(n, abs.layout.slot(abs_id).actions);
        for a in 0..n {
            probs[full.layout.seq(full_id, a)] = strat.probs[abs.layout.seq(abs_id, a)];
        }
    }
    Ok(BehavioralStrategy { player: p, probs })
}

/// Solve the abstract game by self-play and lift both averages: the standard
/// way to generate an intentionally suboptimal target profile.
pub fn target_profile_from_abstraction(
    game: &PokerGame,
    name: &str,
    iterations: usize,
) -> Result<(BehavioralStrategy, BehavioralStrategy)> {
    let abstraction = build_poker_abstraction(game, name)?;
    let mut run = CfrRun::new(&abstraction.abstract_game);
    run.run(iterations);
    let mut halves = Vec::new();
    for p in PLAYERS {
        let b = BehavioralStrategy {
            player: p,
            probs: run.average_behavioral(p)?,
        };
        halves.push(lift_behavioral(&abstraction, game, &b)?);
    }
    let two = halves.pop().unwrap();
    let one = halves.pop().unwrap();
    Ok((one, two))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfr::exploitability;
    use crate::efg::Player;
    use crate::efg::{seq_of, validate};
    use crate::games::poker::{build_kuhn, build_leduc};

    #[test]
    fn leduc_preflop_buckets_are_two() {
        let game = build_leduc();
        let a = build_leduc_abstraction(&game, "JQ.K/pair.nopair").unwrap();
        // Round-0 root infosets of player 1 collapse to two buckets.
        let full = &game.tree;
        let mut roots = std::collections::HashSet::new();
        for (id, d) in game.meta.infoset_detail[0].iter().enumerate() {
            if d.round == 0 && d.betting.is_empty() {
                roots.insert(a.map[0][id]);
            }
        }
        assert_eq!(roots.len(), 2);
        assert!(a.abstract_game.infosets(Player::One).len() < full.infosets(Player::One).len());
    }

    #[test]
    fn unknown_abstraction_rejected() {
        let game = build_leduc();
        assert!(build_leduc_abstraction(&game, "JQ.K").is_err());
        assert!(build_leduc_abstraction(&game, "nonsense//").is_err());
    }

    #[test]
    fn lifting_uniform_is_valid() {
        let game = build_leduc();
        let a = build_leduc_abstraction(&game, "JQ.K/pair.nopair").unwrap();
        for p in PLAYERS {
            let uni = BehavioralStrategy::uniform(
                &a.abstract_game.seq_index(p).unwrap().layout,
                p,
            );
            let lifted = lift_behavioral(&a, &game, &uni).unwrap();
            let x = seq_of(&lifted, &game.tree).unwrap();
            assert!(validate(&x, &game.tree).unwrap().ok(1e-12));
        }
    }

    #[test]
    fn abstract_kuhn_cfr_converges_in_abstract_game() {
        let game = build_kuhn();
        let a = build_kuhn_abstraction(&game, "JQ.K").unwrap();
        let mut run = CfrRun::new(&a.abstract_game);
        run.run(100_000);
        let b1 = BehavioralStrategy {
            player: Player::One,
            probs: run.average_behavioral(Player::One).unwrap(),
        };
        let b2 = BehavioralStrategy {
            player: Player::Two,
            probs: run.average_behavioral(Player::Two).unwrap(),
        };
        let e = exploitability(&a.abstract_game, (&b1, &b2)).unwrap();
        assert!(e <= 0.005, "abstract-game exploitability {e}");
    }

    #[test]
    fn lifted_target_is_exploitable_in_full_game() {
        let game = build_kuhn();
        let (t1, t2) = target_profile_from_abstraction(&game, "JQ.K", 50_000).unwrap();
        let e = exploitability(&game.tree, (&t1, &t2)).unwrap();
        // Merging J and Q keeps the target away from full-game equilibrium.
        assert!(e > 0.01, "target exploitability {e}");
    }
}
