//! Sequence-form LP oracle: equilibria, constrained duals, and the
//! plain-text LP export.
//!
//! ```text
//! cargo run --release --example lp_equilibrium
//! ```

use ccfr::constraints::LinearConstraint;
use ccfr::efg::Player;
use ccfr::games::{build_kuhn, matching_pennies};
use ccfr::lp::{build_sequence_lp, constrained_equilibrium};
use ccfr::solver::ConstraintSet;

fn main() {
    // Matching pennies: value 0, uniform play.
    let mp = matching_pennies();
    let none = ConstraintSet::new(Player::One);
    let eq = constrained_equilibrium(&mp, Player::One, &none, false).unwrap();
    println!(
        "matching pennies: value {:+.2e}, x = {:?}",
        eq.value,
        &eq.x.values[1..]
    );
    let slp = build_sequence_lp(&mp, Player::One, &none, false).unwrap();
    let (rows, cols) = slp.dimensions();
    println!("LP export ({rows} rows x {cols} columns):\n{}", slp.lp.to_text());

    // Kuhn: the analytic value is -1/18.
    let kuhn = build_kuhn().tree;
    let eq = constrained_equilibrium(&kuhn, Player::One, &none, false).unwrap();
    println!(
        "kuhn: value {:.6} (analytic {:.6}), {} pivots, primal residual {:.1e}",
        eq.value,
        -1.0 / 18.0,
        eq.pivots,
        eq.max_primal_residual
    );

    // A binding constraint makes the dual positive.
    let seq = kuhn.lookup_seq(Player::One, "Q:", "bet").unwrap();
    let n = kuhn.num_seqs(Player::One).unwrap();
    let mut cs = ConstraintSet::new(Player::One);
    cs.push(LinearConstraint::lower_bound(seq, 0.5, n).unwrap());
    let eq = constrained_equilibrium(&kuhn, Player::One, &cs, false).unwrap();
    println!(
        "kuhn with forced queen bets: value {:.6}, lambda* {:.6}",
        eq.value, eq.lambda[0]
    );
}
