//! Patroller risk constraint for the transit game: the probability of not
//! ending the game at the base, as a linear function of the occupancy
//! measure. Only final-epoch (cell, action) entries carry coefficients.

use crate::cfr::CfrGame;
use crate::efg::Player;
use crate::error::{Error, Result};
use crate::games::NfgssView;
use crate::{constraints::LinearConstraint, solver::Constraint};

/// f(x) = Σ_{s,a at the last epoch} x_{(s,a)}·Pr[next ≠ base] − b_r ≤ 0.
pub fn build_risk_constraint(view: &NfgssView, b_r: f64) -> Result<LinearConstraint> {
    if !(0.0..=1.0).contains(&b_r) {
        return Err(Error::InvalidParam(format!(
            "risk bound must lie in [0,1], got {b_r}"
        )));
    }
    let g = view.game;
    let t = g.horizon - 1;
    let mut coeffs = Vec::new();
    for cell in 0..g.cells {
        for a in 0..g.num_actions(cell) {
            let miss = g.miss_base_probability(cell, a);
            if miss != 0.0 {
                coeffs.push((view.seq(cell, t, a), miss));
            }
        }
    }
    LinearConstraint::new(coeffs, b_r, view.seq_layout().num_seqs)
}

/// Risk of a patroller behavioral strategy, via forward occupancy
/// propagation.
pub fn patroller_risk(view: &NfgssView, strat: &[f64]) -> f64 {
    let mut x = vec![0.0; view.seq_layout().num_seqs];
    view.realization_into(Player::One, strat, &mut x);
    let c = build_risk_constraint(view, 0.0).expect("0 is a valid bound");
    c.value(&x)
}
