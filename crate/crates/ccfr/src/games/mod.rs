//! Built-in benchmark games.

mod abstraction;
mod nfgss;
mod poker;
mod transit;

pub use abstraction::{
    build_kuhn_abstraction, build_leduc_abstraction, build_poker_abstraction, lift_behavioral,
    target_profile_from_abstraction, PokerAbstraction,
};
pub use nfgss::{NfgssView, OccupancyData};
pub use poker::{
    build_kuhn, build_leduc, build_poker, Card, InfosetDetail, PokerGame, PokerMeta, PokerRules,
    PublicEdge, PublicNode, ShowdownRule, TerminalClass, ACTION_BET, ACTION_CALL, ACTION_CHECK,
    ACTION_FOLD, ACTION_RAISE,
};
pub use transit::{build_transit, TransitGame};

use crate::efg::{GameTree, GameTreeBuilder, Player};

/// One-shot matching pennies in extensive form: player 1 commits, player 2
/// answers without observing. Player 1 wins 1 on a match. Value 0.
pub fn matching_pennies() -> GameTree {
    let mut b = GameTreeBuilder::new();
    let acts2 = vec!["h".to_string(), "t".to_string()];
    let mut p2_nodes = Vec::new();
    for p1_action in 0..2 {
        let hh = b.terminal(if p1_action == 0 { 1.0 } else { -1.0 });
        let tt = b.terminal(if p1_action == 1 { 1.0 } else { -1.0 });
        p2_nodes.push(
            b.decision(Player::Two, "p2", &acts2, vec![hh, tt])
                .expect("consistent actions"),
        );
    }
    let acts1 = vec!["H".to_string(), "T".to_string()];
    let root = b
        .decision(Player::One, "p1", &acts1, p2_nodes)
        .expect("consistent actions");
    b.finish(root).expect("well-formed tree")
}
