//! Opponent modeling from partially observed games on Kuhn poker.
//!
//! A deliberately weak target profile (solved in a rank-bucket abstraction
//! that merges J and Q) plays against a uniform non-fold probe. Private
//! cards are seen only at showdowns. Wilson-interval constraints on the
//! target's reach probabilities define a set of plausible opponents; a
//! constrained solve per seat yields a robust counter-profile. As the
//! number of observed games grows, its value against the target climbs
//! from the equilibrium line to the best-response line.
//!
//! ```text
//! cargo run --release --example opponent_model
//! ```

use ccfr::cfr::exact_best_response;
use ccfr::constraints::{
    build_exact_constraints, build_opponent_constraints, probe_strategy, robust_counter_profile,
    simulate_observations, two_seat_value, OpponentModelOptions,
};
use ccfr::efg::{behavioral_of, Player};
use ccfr::games::{build_kuhn, target_profile_from_abstraction};
use ccfr::lp::equilibrium_profile;
use ccfr::solver::{CcfrConfig, StepRule};

fn main() {
    let game = build_kuhn();
    let target = target_profile_from_abstraction(&game, "JQ.K", 50_000).unwrap();
    let target_ref = (&target.0, &target.1);

    let (x, y, _) = equilibrium_profile(&game.tree, false).unwrap();
    let nash = (
        behavioral_of(&x, &game.tree).unwrap(),
        behavioral_of(&y, &game.tree).unwrap(),
    );
    let nash_ref = two_seat_value(&game, (&nash.0, &nash.1), target_ref);
    let br1 = exact_best_response(&game.tree, &target.1, Player::One).unwrap();
    let br2 = exact_best_response(&game.tree, &target.0, Player::Two).unwrap();
    let br_ref = two_seat_value(&game, (&br1.1, &br2.1), target_ref);
    println!("nash reference {nash_ref:.5}, best-response reference {br_ref:.5}\n");

    let probes = [
        probe_strategy(&game, Player::One),
        probe_strategy(&game, Player::Two),
    ];
    let mut config = CcfrConfig::new(100_000);
    config.step_rule = StepRule::Decaying { c: 1000.0 };
    let options = OpponentModelOptions {
        gamma: 0.99,
        use_estimated_own_reach: true,
    };

    println!("observed games    mean      min       max     (5 seeds, gamma 0.99)");
    for n in [100usize, 1_000, 10_000, 100_000] {
        let mut values = Vec::new();
        for seed in 0..5 {
            let log1 =
                simulate_observations(&game, target_ref, Player::Two, n, 40 + seed).unwrap();
            let log2 =
                simulate_observations(&game, target_ref, Player::One, n, 4_000 + seed).unwrap();
            let cs1 = build_opponent_constraints(&game, &log1, &options, &probes[1]).unwrap();
            let cs2 = build_opponent_constraints(&game, &log2, &options, &probes[0]).unwrap();
            let counter = robust_counter_profile(&game, [&cs1, &cs2], &config).unwrap();
            values.push(two_seat_value(
                &game,
                (&counter.ours[0], &counter.ours[1]),
                target_ref,
            ));
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!("{n:>14}    {mean:.5}   {min:.5}   {max:.5}");
    }

    // Infinite-data limit: equality constraints pin the target's reach
    // probabilities; the counter-profile attains the best-response value.
    let cs1 = build_exact_constraints(&game, target_ref, Player::Two, &probes[1]).unwrap();
    let cs2 = build_exact_constraints(&game, target_ref, Player::One, &probes[0]).unwrap();
    let counter = robust_counter_profile(&game, [&cs1, &cs2], &config).unwrap();
    let exact = two_seat_value(&game, (&counter.ours[0], &counter.ours[1]), target_ref);
    println!("\nexact probabilities: value {exact:.5} (best response {br_ref:.5})");
}
