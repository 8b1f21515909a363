//! Counterfactual regret minimization and evaluation.

mod best_response;
mod regret;
mod state;
mod sweep;
mod values;

pub use best_response::{approximate_best_response, exact_best_response, exploitability};
pub use regret::{regret_match, regret_match_into};
pub use state::{
    convergence_csv, convergence_log, normalize_to_behavioral, CfrRun, ConvergenceRow,
    PlayerState,
};
pub use sweep::SweepScratch;
pub use values::counterfactual_value;

use crate::efg::{Player, SeqLayout};

/// A game the regret-matching engines can drive. Implemented by
/// perfect-recall [`crate::efg::GameTree`]s and by the transit game's
/// solver view, which replaces the tree sweep with occupancy propagation.
///
/// Strategy arguments are flat behavioral vectors over the player's
/// sequence layout (`strats[0]` for player 1, `strats[1]` for player 2).
/// Values and realizations use the same indexing, with entry 0 reserved for
/// the empty sequence.
pub trait CfrGame: Sync {
    fn layout(&self, player: Player) -> &SeqLayout;

    /// Realization-plan vector of a behavioral strategy (`out[0]` = 1). For
    /// trees this is SEQ(σ); for the transit view it is the occupancy
    /// measure, which plays the same role.
    fn realization_into(&self, player: Player, strat: &[f64], out: &mut [f64]);

    /// One bottom-up value pass for `player`: fills `values[seq(I,a)]` with
    /// the (tilted) counterfactual action values under the given profile and
    /// returns the root value. `tilt`, when present, is subtracted from this
    /// player's action values before they propagate upward.
    fn sweep_values(
        &self,
        player: Player,
        strats: [&[f64]; 2],
        tilt: Option<&[f64]>,
        values: &mut [f64],
        scratch: &mut SweepScratch,
    ) -> f64;

    /// Value of the best response of `player` against a fixed opponent, from
    /// `player`'s perspective.
    fn best_response_value(&self, player: Player, opponent: &[f64]) -> f64;

    /// Expected player-1 utility of a behavioral profile.
    fn expected_value(&self, strats: [&[f64]; 2]) -> f64;

    /// (min, max) over terminal player-1 utilities.
    fn utility_range(&self) -> (f64, f64);

    /// Bound constant M: the maximum over pure strategies of the summed own
    /// reach over the player's infosets.
    fn reach_weight_bound(&self, player: Player) -> f64;

    /// max over the player's realization polytope of Σ_s coeffs[s]·x_s
    /// (coeffs[0] applies to the fixed x_∅ = 1 entry).
    fn maximize_linear(&self, player: Player, coeffs: &[f64]) -> f64;

    /// Random behavioral strategy (flat), for sampled bound estimates.
    fn random_strategy(&self, player: Player, rng: &mut dyn rand::RngCore) -> Vec<f64>;
}

/// Exponentially spaced checkpoint iterations in `[1, t_max]`, always
/// including `t_max`.
pub fn checkpoints(t_max: usize, per_decade: u32) -> Vec<usize> {
    let mut out = Vec::new();
    if t_max == 0 {
        return out;
    }
    let per_decade = per_decade.max(1) as f64;
    let mut k = 0u32;
    loop {
        let t = 10f64.powf(k as f64 / per_decade).round() as usize;
        if t >= t_max {
            break;
        }
        if out.last() != Some(&t) {
            out.push(t);
        }
        k += 1;
    }
    out.push(t_max);
    out
}
