//! Desk-scale LP oracle: sequence-form equilibria via a from-scratch dense
//! simplex, with dual extraction for the strategy-constraint multipliers.

mod sequence_lp;
mod simplex;

pub use sequence_lp::{
    build_sequence_lp, constrained_equilibrium, equilibrium_profile, LpEquilibrium, SequenceLp,
    MAX_SEQUENCES,
};
pub use simplex::{simplex_solve, Lp, LpRow, LpSolution, LpStatus, Rel, FEAS_TOL, PIVOT_TOL};
