//! Multiplier-ceiling selection by doubling.
//!
//! When the ceiling β is below the optimal multiplier, the mean multiplier
//! crowds the ceiling; doubling β and rerunning (warm-starting λ only)
//! eventually clears the dual and the constraint violation collapses.
//!
//! ```text
//! cargo run --release --example beta_doubling
//! ```

use ccfr::constraints::LinearConstraint;
use ccfr::efg::Player;
use ccfr::games::build_kuhn;
use ccfr::lp::constrained_equilibrium;
use ccfr::solver::{beta_doubling_solve, CcfrConfig, ConstraintSet, StepRule};

fn main() {
    let game = build_kuhn().tree;
    let seq = game.lookup_seq(Player::One, "Q:", "bet").unwrap();
    let n = game.num_seqs(Player::One).unwrap();
    let mut constraints = ConstraintSet::new(Player::One);
    constraints.push(LinearConstraint::lower_bound(seq, 0.5, n).unwrap());

    let lp = constrained_equilibrium(&game, Player::One, &constraints, false).unwrap();
    println!("LP dual lambda* = {:.6}\n", lp.lambda[0]);

    let mut config = CcfrConfig::new(50_000);
    config.beta = Some(lp.lambda[0] / 8.0); // deliberately too small
    config.step_rule = StepRule::Constant { alpha: 1.0 };
    config.beta_doubling = true;
    let result = beta_doubling_solve(&game, &constraints, &config).unwrap();

    println!("beta        mean lambda   doubled?");
    for step in &result.doubling_trace {
        println!(
            "{:<9.4}   {:<11.4}   {}",
            step.beta, step.lambda_mean[0], step.triggered
        );
    }
    println!(
        "\nfinal beta {:.4} (> lambda*), violation {:+.2e}, cap hit: {}",
        result.beta, result.final_violations[0], result.doubling_cap_hit
    );
}
