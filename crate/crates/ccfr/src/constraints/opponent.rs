//! Opponent-model constraints from partially observed games.
//!
//! Two families of affine constraints on the modeled opponent's sequence
//! entries, both from Wilson intervals at confidence γ:
//!
//! - reach constraints, one pair per (own hand, public sequence): the
//!   probability of holding the hand while play reaches the public node is
//!   an own-reach/chance-weighted sum of the opponent's sequence entries
//!   over their possible hands;
//! - showdown constraints, one pair per showdown terminal, whose full
//!   history is observed whenever it occurs.
//!
//! Own reach enters as an estimate from the same log by default (the
//! empirical per-decision action frequencies given the hand, falling back
//! to the known probe probabilities at unvisited decisions); the known
//! probe probabilities can be used instead. Unobserved statistics still
//! produce (vacuous) constraints so k is constant across logs.

use std::collections::HashMap;

use crate::cfr::CfrGame;
use crate::constraints::linear::LinearConstraint;
use crate::constraints::observe::ObservationLog;
use crate::constraints::stats::wilson_interval;
use crate::efg::{reach_probability, BehavioralStrategy, Player};
use crate::error::{Error, Result};
use crate::games::{PokerGame, PublicEdge};
use crate::solver::{CcfrConfig, CcfrResult, ConstraintSet};

#[derive(Debug, Clone, Copy)]
pub struct OpponentModelOptions {
    pub gamma: f64,
    /// Estimate own reach from the log rather than using the known probe.
    pub use_estimated_own_reach: bool,
}

impl Default for OpponentModelOptions {
    fn default() -> Self {
        OpponentModelOptions {
            gamma: 0.95,
            use_estimated_own_reach: true,
        }
    }
}

/// Per-(hand, public node) own-reach table for the probe player.
struct OwnReach {
    cards: usize,
    values: Vec<f64>,
}

impl OwnReach {
    fn get(&self, card: u8, public: usize) -> f64 {
        self.values[public * self.cards + card as usize]
    }
}

/// Probe action probability along a public edge, from the probe strategy.
fn probe_edge_probability(
    game: &PokerGame,
    probe: &BehavioralStrategy,
    card: u8,
    parent_public: usize,
    label: &str,
) -> f64 {
    let parent_key = &game.meta.public_nodes[parent_public].key;
    let card_label = &game.rules.deck[card as usize].label;
    let infoset_key = format!("{card_label}:{parent_key}");
    let player = probe.player;
    match game.tree.lookup_infoset(player, &infoset_key) {
        Some(id) => {
            let info = game.tree.infoset(player, id);
            let a = info
                .actions
                .iter()
                .position(|x| x == label)
                .expect("public edge label is an action of the infoset");
            let index = game.tree.seq_index(player).expect("perfect recall");
            probe.probs[index.layout.seq(id, a)]
        }
        // The (card, public) combination never occurs as a probe decision
        // (impossible deal); the factor is irrelevant.
        None => 1.0,
    }
}

/// Own-reach table: product over the probe's decision edges along each
/// public path of either the empirical conditional action frequency given
/// the hand (with probe fallback at zero-count decisions) or the probe
/// probability itself.
fn own_reach_table(
    game: &PokerGame,
    probe: &BehavioralStrategy,
    reach_counts: Option<&[u64]>,
    cards: usize,
) -> OwnReach {
    let publics = game.meta.public_nodes.len();
    let mut values = vec![1.0; publics * cards];
    for p in 1..publics {
        let (parent, edge) = game.meta.public_nodes[p]
            .parent
            .as_ref()
            .expect("non-root public node has a parent");
        for card in 0..cards as u8 {
            let up = values[parent * cards + card as usize];
            let factor = match edge {
                PublicEdge::Action { player, label } if *player == probe.player => {
                    let empirical = reach_counts.and_then(|counts| {
                        let denom = counts[parent * cards + card as usize];
                        if denom > 0 {
                            Some(counts[p * cards + card as usize] as f64 / denom as f64)
                        } else {
                            None
                        }
                    });
                    empirical
                        .unwrap_or_else(|| probe_edge_probability(game, probe, card, *parent, label))
                }
                _ => 1.0,
            };
            values[p * cards + card as usize] = up * factor;
        }
    }
    OwnReach { cards, values }
}

/// Per-(hand, public) visit counts from the log, counting every public
/// prefix of each recorded terminal.
fn reach_counts(game: &PokerGame, log: &ObservationLog, cards: usize) -> Vec<u64> {
    let publics = game.meta.public_nodes.len();
    let mut counts = vec![0u64; publics * cards];
    for r in &log.records {
        let mut p = r.public_node;
        loop {
            counts[p * cards + r.own_hand as usize] += 1;
            match game.meta.public_nodes[p].parent {
                Some((parent, _)) => p = parent,
                None => break,
            }
        }
    }
    counts
}

/// The opponent-hand expansion of each (own hand, public node) statistic:
/// for every compatible opponent hand, the chance weight and the opponent's
/// sequence entry at the corresponding history.
fn statistic_terms(
    game: &PokerGame,
    probe_player: Player,
) -> Result<HashMap<(u8, usize), Vec<(f64, usize)>>> {
    let opp = probe_player.other();
    let opp_index = game.tree.seq_index(opp)?;
    let mut map: HashMap<(u8, usize), Vec<(f64, usize)>> = HashMap::new();
    for id in 0..game.tree.num_nodes() {
        let hands = game.meta.node_hands[id];
        let (Some(c1), Some(c2)) = (hands[0], hands[1]) else {
            continue;
        };
        let own = if probe_player == Player::One { c1 } else { c2 };
        let public = game.meta.node_public[id];
        map.entry((own, public)).or_default().push((
            game.meta.node_chance[id],
            opp_index.node_seq[id],
        ));
    }
    Ok(map)
}

/// Emit the pair L ≤ expr ≤ U as two affine rows on the opponent's
/// sequences. Entries aggregate coefficients per opponent sequence.
fn push_interval_pair(
    set: &mut ConstraintSet,
    num_seqs: usize,
    terms: &[(f64, usize)],
    scale: f64,
    lower: f64,
    upper: f64,
) -> Result<()> {
    let mut agg: HashMap<usize, f64> = HashMap::new();
    for &(w, seq) in terms {
        *agg.entry(seq).or_insert(0.0) += scale * w;
    }
    let coeffs: Vec<(usize, f64)> = agg.into_iter().collect();
    let mut sorted = coeffs;
    sorted.sort_by_key(|&(i, _)| i);
    let neg: Vec<(usize, f64)> = sorted.iter().map(|&(i, c)| (i, -c)).collect();
    set.push(LinearConstraint::new(sorted, upper, num_seqs)?);
    set.push(LinearConstraint::new(neg, -lower, num_seqs)?);
    Ok(())
}

/// Wilson-interval constraints from a log. The returned set constrains the
/// seat opposite the log's probe player.
pub fn build_opponent_constraints(
    game: &PokerGame,
    log: &ObservationLog,
    options: &OpponentModelOptions,
    probe: &BehavioralStrategy,
) -> Result<ConstraintSet> {
    if log.records.is_empty() {
        return Err(Error::EmptyLog);
    }
    if log.game_hash != game.tree.hash() {
        return Err(Error::LogGameMismatch {
            log: log.game_hash.clone(),
            game: game.tree.hash().to_string(),
        });
    }
    let probe_player = log.probe_player;
    if probe.player != probe_player {
        return Err(Error::InvalidParam(
            "probe strategy seat does not match the log".into(),
        ));
    }
    let opp = probe_player.other();
    let cards = game.num_cards();
    let n = log.records.len() as u64;
    let counts = reach_counts(game, log, cards);
    let own_reach = own_reach_table(
        game,
        probe,
        options.use_estimated_own_reach.then_some(counts.as_slice()),
        cards,
    );
    let terms = statistic_terms(game, probe_player)?;
    let num_seqs = game.tree.num_seqs(opp)?;
    let mut set = ConstraintSet::new(opp);

    // Reach constraints for every (own hand, public sequence).
    let empty = Vec::new();
    for public in 0..game.meta.public_nodes.len() {
        for card in 0..cards as u8 {
            let successes = counts[public * cards + card as usize];
            let (lower, upper) = wilson_interval(successes, n, options.gamma)?;
            let t = terms.get(&(card, public)).unwrap_or(&empty);
            push_interval_pair(
                &mut set,
                num_seqs,
                t,
                own_reach.get(card, public),
                lower,
                upper,
            )?;
        }
    }

    // Showdown constraints per terminal.
    let mut terminal_counts: HashMap<usize, u64> = HashMap::new();
    let terminal_of = showdown_lookup(game, probe_player);
    for r in &log.records {
        if let Some(opp_hand) = r.opp_hand {
            let z = terminal_of
                .get(&(r.own_hand, opp_hand, r.public_node))
                .copied()
                .ok_or_else(|| Error::InvalidParam("record matches no showdown terminal".into()))?;
            *terminal_counts.entry(z).or_insert(0) += 1;
        }
    }
    let opp_index = game.tree.seq_index(opp)?;
    for &z in &game.showdown_terminals() {
        let successes = terminal_counts.get(&z).copied().unwrap_or(0);
        let (lower, upper) = wilson_interval(successes, n, options.gamma)?;
        let own = game.meta.node_hands[z][probe_player.index()].unwrap();
        let public = game.meta.node_public[z];
        let scale = own_reach.get(own, public) * game.meta.node_chance[z];
        let term = [(1.0, opp_index.node_seq[z])];
        push_interval_pair(&mut set, num_seqs, &term, scale, lower, upper)?;
    }
    Ok(set)
}

fn showdown_lookup(game: &PokerGame, probe_player: Player) -> HashMap<(u8, u8, usize), usize> {
    let mut map = HashMap::new();
    for &z in &game.showdown_terminals() {
        let hands = game.meta.node_hands[z];
        let own = hands[probe_player.index()].unwrap();
        let opp = hands[probe_player.other().index()].unwrap();
        map.insert((own, opp, game.meta.node_public[z]), z);
    }
    map
}

/// Infinite-data limit: equality constraints built from the exact reach
/// probabilities of (probe, target) play, with exact own reach. The
/// target's sequence form satisfies every constraint with zero violation.
pub fn build_exact_constraints(
    game: &PokerGame,
    target: (&BehavioralStrategy, &BehavioralStrategy),
    probe_player: Player,
    probe: &BehavioralStrategy,
) -> Result<ConstraintSet> {
    let opp = probe_player.other();
    let cards = game.num_cards();
    let own_reach = own_reach_table(game, probe, None, cards);
    let terms = statistic_terms(game, probe_player)?;
    let num_seqs = game.tree.num_seqs(opp)?;
    let opp_index = game.tree.seq_index(opp)?;
    let mut set = ConstraintSet::new(opp);

    let profile = match probe_player {
        Player::One => (probe, target.1),
        Player::Two => (target.0, probe),
    };

    // Exact Pr[c_i, s]: sum node reach over the opponent's hands.
    let mut exact: HashMap<(u8, usize), f64> = HashMap::new();
    for id in 0..game.tree.num_nodes() {
        let hands = game.meta.node_hands[id];
        let (Some(c1), Some(c2)) = (hands[0], hands[1]) else {
            continue;
        };
        let own = if probe_player == Player::One { c1 } else { c2 };
        let public = game.meta.node_public[id];
        let r = reach_probability(&game.tree, profile, id)?;
        *exact.entry((own, public)).or_insert(0.0) += r.total;
    }
    let empty = Vec::new();
    for public in 0..game.meta.public_nodes.len() {
        for card in 0..cards as u8 {
            let value = exact.get(&(card, public)).copied().unwrap_or(0.0);
            let t = terms.get(&(card, public)).unwrap_or(&empty);
            push_interval_pair(
                &mut set,
                num_seqs,
                t,
                own_reach.get(card, public),
                value,
                value,
            )?;
        }
    }
    for &z in &game.showdown_terminals() {
        let r = reach_probability(&game.tree, profile, z)?;
        let own = game.meta.node_hands[z][probe_player.index()].unwrap();
        let public = game.meta.node_public[z];
        let scale = own_reach.get(own, public) * game.meta.node_chance[z];
        let term = [(1.0, opp_index.node_seq[z])];
        push_interval_pair(&mut set, num_seqs, &term, scale, r.total, r.total)?;
    }
    Ok(set)
}

/// Robust counter-profile: one constrained solve per seat with the modeled
/// opponent as the constrained player (the solver transposes internally for
/// seat 2); our halves are the unconstrained sides of each run.
pub struct CounterProfile {
    /// Our strategy when seated as player 1 / player 2.
    pub ours: [BehavioralStrategy; 2],
    pub runs: [CcfrResult; 2],
}

pub fn robust_counter_profile(
    game: &PokerGame,
    constraints_per_seat: [&ConstraintSet; 2],
    config: &CcfrConfig,
) -> Result<CounterProfile> {
    if constraints_per_seat[0].player != Player::One
        || constraints_per_seat[1].player != Player::Two
    {
        return Err(Error::InvalidParam(
            "constraint sets must target seats 1 and 2 in order".into(),
        ));
    }
    // Opponent modeled as seat 1: we play seat 2.
    let mut cfg = config.clone();
    cfg.constrained_player = Player::One;
    let run_a = crate::solver::solve(&game.tree, constraints_per_seat[0], &cfg)?;
    // Opponent modeled as seat 2: we play seat 1.
    let mut cfg = config.clone();
    cfg.constrained_player = Player::Two;
    let run_b = crate::solver::solve(&game.tree, constraints_per_seat[1], &cfg)?;
    let ours = [
        BehavioralStrategy {
            player: Player::One,
            probs: run_b.avg_behavioral[0].clone(),
        },
        BehavioralStrategy {
            player: Player::Two,
            probs: run_a.avg_behavioral[1].clone(),
        },
    ];
    Ok(CounterProfile {
        ours,
        runs: [run_a, run_b],
    })
}

/// Mean per-game value of playing `ours` against `target` across both
/// seatings, from our perspective.
pub fn two_seat_value(
    game: &PokerGame,
    ours: (&BehavioralStrategy, &BehavioralStrategy),
    target: (&BehavioralStrategy, &BehavioralStrategy),
) -> f64 {
    let as_p1 = game.tree.expected_value([&ours.0.probs, &target.1.probs]);
    let as_p2 = game.tree.expected_value([&target.0.probs, &ours.1.probs]);
    0.5 * (as_p1 - as_p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::observe::{probe_strategy, simulate_observations};
    use crate::efg::seq_of;
    use crate::games::build_kuhn;

    fn kuhn_profiles() -> (PokerGame, BehavioralStrategy, BehavioralStrategy) {
        let game = build_kuhn();
        let (t1, t2) =
            crate::games::target_profile_from_abstraction(&game, "JQ.K", 20_000).unwrap();
        (game, t1, t2)
    }

    #[test]
    fn constraint_count_is_log_independent() {
        let (game, t1, t2) = kuhn_profiles();
        let probe = probe_strategy(&game, Player::Two);
        let opts = OpponentModelOptions::default();
        let mut ks = Vec::new();
        for seed in [1, 2] {
            let log = simulate_observations(&game, (&t1, &t2), Player::Two, 30, seed).unwrap();
            let set = build_opponent_constraints(&game, &log, &opts, &probe).unwrap();
            assert_eq!(set.player, Player::One);
            ks.push(set.k());
        }
        assert_eq!(ks[0], ks[1]);
        // 3 hands × 9 public sequences × 2 + 18 showdown terminals × 2.
        assert_eq!(ks[0], 3 * 9 * 2 + 18 * 2);
    }

    #[test]
    fn exact_constraints_pin_the_target() {
        let (game, t1, t2) = kuhn_profiles();
        let probe = probe_strategy(&game, Player::Two);
        let set = build_exact_constraints(&game, (&t1, &t2), Player::Two, &probe).unwrap();
        let y = seq_of(&t1, &game.tree).unwrap();
        let violations = set.values(&y.values);
        let worst = violations.iter().cloned().fold(f64::MIN, f64::max);
        assert!(worst <= 1e-10, "worst violation {worst}");
    }

    #[test]
    fn observed_constraints_cover_target_at_rate_gamma() {
        let (game, t1, t2) = kuhn_profiles();
        let probe = probe_strategy(&game, Player::Two);
        let gamma = 0.9;
        let opts = OpponentModelOptions {
            gamma,
            use_estimated_own_reach: false,
        };
        let y = seq_of(&t1, &game.tree).unwrap();
        let trials = 300usize;
        let mut violation_counts: Vec<u64> = Vec::new();
        for seed in 0..trials as u64 {
            let log =
                simulate_observations(&game, (&t1, &t2), Player::Two, 200, 1000 + seed).unwrap();
            let set = build_opponent_constraints(&game, &log, &opts, &probe).unwrap();
            let values = set.values(&y.values);
            if violation_counts.is_empty() {
                violation_counts = vec![0; set.k()];
            }
            for (i, v) in values.iter().enumerate() {
                if *v > 1e-9 {
                    violation_counts[i] += 1;
                }
            }
        }
        // Each constraint individually violates the target with frequency at
        // most (1−γ) plus sampling noise.
        let allowed = (1.0 - gamma)
            + 3.0 * ((1.0 - gamma) * gamma / trials as f64).sqrt()
            + 0.02;
        for (i, &c) in violation_counts.iter().enumerate() {
            let freq = c as f64 / trials as f64;
            assert!(
                freq <= allowed,
                "constraint {i} violated target in {freq:.3} of logs (allowed {allowed:.3})"
            );
        }
    }

    #[test]
    fn hand_built_log_coefficients() {
        // Five hand-written Kuhn records, probe as player 2. Own hand ids:
        // J=0, Q=1, K=2. Public nodes resolved by key lookup.
        let game = build_kuhn();
        let probe = probe_strategy(&game, Player::Two);
        let public_id = |key: &str| {
            game.meta
                .public_nodes
                .iter()
                .position(|p| p.key == key)
                .unwrap()
        };
        let kk = public_id("kk");
        let bf = public_id("bf");
        use crate::constraints::observe::{ObservationLog, ObservationRecord};
        let log = ObservationLog {
            probe_player: Player::Two,
            records: vec![
                ObservationRecord { own_hand: 0, public_node: kk, opp_hand: Some(1) },
                ObservationRecord { own_hand: 0, public_node: kk, opp_hand: Some(2) },
                ObservationRecord { own_hand: 1, public_node: bf, opp_hand: None },
                ObservationRecord { own_hand: 2, public_node: kk, opp_hand: Some(0) },
                ObservationRecord { own_hand: 2, public_node: bf, opp_hand: None },
            ],
            game_hash: game.tree.hash().to_string(),
            probe_description: "uniform-non-fold".into(),
        };
        let opts = OpponentModelOptions {
            gamma: 0.95,
            use_estimated_own_reach: false,
        };
        let set = build_opponent_constraints(&game, &log, &opts, &probe).unwrap();

        // Statistic (own hand J, public ∅): the opponent (player 1) has
        // hands Q or K, each with chance 1/6, opponent sequence ∅ (they have
        // not acted), probe reach 1. Expected upper row: coefficient 2/6 at
        // the ∅ entry, offset U from wilson(5 successes of 5? no: reaches of
        // the root are all 5 games for each hand... successes for (J, ∅) =
        // number of records with own hand J = 2 of n = 5.
        let (l, u) = wilson_interval(2, 5, 0.95).unwrap();
        // Row order: publics in id order, cards inner; ∅ is public 0; J = 0;
        // two rows per statistic (upper first).
        let upper = set.get(0);
        let lower = set.get(1);
        let opp_seqs = game.tree.num_seqs(Player::One).unwrap();
        let mut y = vec![0.0; opp_seqs];
        y[0] = 1.0; // only the ∅ entry matters here
        assert!((upper.value(&y) - (2.0 / 6.0 - u)).abs() <= 1e-12);
        assert!((lower.value(&y) - (l - 2.0 / 6.0)).abs() <= 1e-12);
    }

    #[test]
    fn empty_log_rejected() {
        let game = build_kuhn();
        let probe = probe_strategy(&game, Player::Two);
        let log = ObservationLog {
            probe_player: Player::Two,
            records: vec![],
            game_hash: game.tree.hash().to_string(),
            probe_description: String::new(),
        };
        let opts = OpponentModelOptions::default();
        assert!(build_opponent_constraints(&game, &log, &opts, &probe).is_err());
    }
}
