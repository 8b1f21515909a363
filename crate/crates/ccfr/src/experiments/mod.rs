//! Reproducible experiment runners behind the CLI subcommands.

mod config;
mod runner;

pub use config::{
    ConstraintSpec, ExperimentConfig, ExperimentKind, GameSelect, OpponentModelSection,
    SolverSection, StepSection, TransitSweepSection,
};
pub use runner::{
    cmd_bound_audit, cmd_lp_compare, cmd_opponent_model, cmd_solve, cmd_transit_sweep,
    RunOptions,
};
