//! Concrete constraint implementations and builders.

mod linear;
mod observe;
mod opponent;
mod risk;
mod stats;

pub use linear::{linear_constraint, LinearConstraint};
pub use observe::{
    probe_strategy, simulate_observations, ObservationLog, ObservationRecord,
};
pub use opponent::{
    build_exact_constraints, build_opponent_constraints, robust_counter_profile, two_seat_value,
    CounterProfile, OpponentModelOptions,
};
pub use risk::{build_risk_constraint, patroller_risk};
pub use stats::{normal_quantile, wilson_interval, IntervalBound};
