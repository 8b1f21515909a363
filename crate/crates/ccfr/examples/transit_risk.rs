//! Risk/coverage tradeoff in the transit pursuit game.
//!
//! The patroller maximizes interceptions subject to a bound on the
//! probability of not returning to base by the end of the game. Sweeping
//! the bound traces the tradeoff: the measured risk of the average strategy
//! pins each bound, and the evader's best-response value falls as the bound
//! loosens.
//!
//! ```text
//! cargo run --release --example transit_risk
//! ```

use ccfr::cfr::CfrGame;
use ccfr::constraints::{build_risk_constraint, patroller_risk};
use ccfr::efg::Player;
use ccfr::games::build_transit;
use ccfr::solver::{solve_view, CcfrConfig, ConstraintSet, StepRule};

fn main() {
    let game = build_transit(3).unwrap();
    let view = game.nfgss_view();
    println!(
        "transit w=3 (hash {}): {}x{} grid, horizon {}, base at cell {}\n",
        game.hash(),
        game.cols,
        game.rows,
        game.horizon,
        game.base
    );

    println!("b_r     risk        evader BR   patroller value   mean lambda");
    for b_r in [0.02, 0.05, 0.1, 0.2, 0.5] {
        let mut constraints = ConstraintSet::new(Player::One);
        constraints.push(build_risk_constraint(&view, b_r).unwrap());
        let mut config = CcfrConfig::new(100_000);
        config.step_rule = StepRule::Constant { alpha: 1.0 };
        let result = solve_view(&view, &constraints, &config).unwrap();
        let risk = patroller_risk(&view, &result.avg_behavioral[0]);
        let evader_br = view.best_response_value(Player::Two, &result.avg_behavioral[0]);
        println!(
            "{b_r:<5}   {risk:.6}   {evader_br:.6}   {:+.6}         {:.3}",
            result.value, result.lambda_mean[0]
        );
    }
}
