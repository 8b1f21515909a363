//! Constrained solver: Lagrangian-tilted regret matching with projected
//! gradient ascent on the multipliers.

mod bounds;
mod constraint;
mod driver;
mod tilted;

pub use bounds::{compute_bound_constants, theorem_bounds, BoundReport, TheoremBounds};
pub use constraint::{Constraint, ConstraintSet};
pub use driver::{
    beta_doubling_solve, measure_lambda_regret, solve, solve_view, CcfrConfig, CcfrResult,
    CcfrRun, DiagRow, DoublingStep, LagrangeState, StepRule,
};
pub use tilted::{tilt, tilted_value_closed_form, tilted_values_closed_form};
