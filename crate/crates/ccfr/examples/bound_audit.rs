//! Convergence-bound audit: measured violations against the evaluated
//! right-hand sides of the feasibility bounds, at every checkpoint.
//!
//! ```text
//! cargo run --release --example bound_audit
//! ```

use ccfr::constraints::LinearConstraint;
use ccfr::efg::Player;
use ccfr::games::build_kuhn;
use ccfr::lp::constrained_equilibrium;
use ccfr::solver::{solve_view, theorem_bounds, CcfrConfig, ConstraintSet, StepRule};

fn main() {
    let game = build_kuhn().tree;
    let seq = game.lookup_seq(Player::One, "Q:", "bet").unwrap();
    let n = game.num_seqs(Player::One).unwrap();
    let mut constraints = ConstraintSet::new(Player::One);
    constraints.push(LinearConstraint::lower_bound(seq, 0.5, n).unwrap());
    let lp = constrained_equilibrium(&game, Player::One, &constraints, false).unwrap();

    let mut config = CcfrConfig::new(200_000);
    config.beta = Some(16.0);
    config.step_rule = StepRule::Constant { alpha: 1.0 };
    let result = solve_view(&game, &constraints, &config).unwrap();

    let report = &result.bound_report;
    println!(
        "constants: delta_u {}, k {}, |A| {}, F {}, G {}, M {}\n",
        report.delta_u,
        report.k,
        report.max_actions,
        report.subgradient_norm_bound,
        report.value_bound,
        report.reach_weight
    );
    println!("iteration   f(x̄)        thm2 rhs   thm3 rhs   ok");
    let mut all_ok = true;
    for d in &result.diagnostics {
        let bounds = theorem_bounds(
            report,
            d.iteration,
            result.beta,
            d.lambda_regret,
            Some(&lp.lambda),
        );
        let ok = d.violations[0] <= bounds.thm2_rhs;
        all_ok &= ok;
        println!(
            "{:9}   {:+.3e}   {:8.3}   {:8.3}   {}",
            d.iteration,
            d.violations[0],
            bounds.thm2_rhs,
            bounds.thm3_rhs.as_ref().unwrap()[0],
            ok
        );
    }
    println!("\nall checkpoints within the feasibility bound: {all_ok}");
    assert!(all_ok, "a violated bound falsifies the implementation");
}
