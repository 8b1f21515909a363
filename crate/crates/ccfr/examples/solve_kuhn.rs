//! Vanilla self-play on Kuhn poker: exploitability of the average profile
//! falls like 1/√T toward the game value of −1/18.
//!
//! ```text
//! cargo run --release --example solve_kuhn
//! ```

use ccfr::cfr::{convergence_csv, convergence_log};
use ccfr::efg::Player;
use ccfr::games::build_kuhn;

fn main() {
    let game = build_kuhn();
    println!("kuhn poker (hash {})", game.tree.hash());
    println!(
        "{} nodes, {} terminals, {} infosets per player\n",
        game.tree.num_nodes(),
        game.tree.terminals().len(),
        game.tree.infosets(Player::One).len()
    );

    let rows = convergence_log(&game.tree, 200_000, 4).unwrap();
    print!("{}", convergence_csv(&rows));

    let last = rows.last().unwrap();
    println!(
        "\nfinal: exploitability {:.3e}, value {:.6} (analytic -1/18 = {:.6})",
        last.exploitability,
        last.value,
        -1.0 / 18.0
    );
}
