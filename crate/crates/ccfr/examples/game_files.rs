//! On-disk formats: game trees as JSON (exact round trip) and observation
//! logs as headed text files.
//!
//! ```text
//! cargo run --release --example game_files
//! ```

use ccfr::constraints::{simulate_observations, ObservationLog};
use ccfr::efg::{GameTree, Player};
use ccfr::games::build_kuhn;

fn main() {
    let game = build_kuhn();

    // Game serialization: nodes, infosets, chance probabilities, utilities.
    let json = game.tree.to_json();
    let reloaded = GameTree::from_json(&json).unwrap();
    println!(
        "kuhn serialized to {} bytes of JSON; hash {} -> {} (round trip exact: {})",
        json.len(),
        game.tree.hash(),
        reloaded.hash(),
        game.tree.hash() == reloaded.hash()
    );

    // Observation log: one record per line, header carries the game hash
    // and probe description.
    let u1 = ccfr::efg::BehavioralStrategy::uniform(
        &game.tree.seq_index(Player::One).unwrap().layout,
        Player::One,
    );
    let u2 = ccfr::efg::BehavioralStrategy::uniform(
        &game.tree.seq_index(Player::Two).unwrap().layout,
        Player::Two,
    );
    let log = simulate_observations(&game, (&u1, &u2), Player::Two, 8, 7).unwrap();
    let text = log.to_text();
    println!("\n{text}");
    let back = ObservationLog::from_text(&text).unwrap();
    println!(
        "parsed {} records back (round trip exact: {})",
        back.n(),
        back.records == log.records
    );
}
