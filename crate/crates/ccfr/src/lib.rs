//! Solver library for two-player zero-sum extensive-form games under convex
//! strategy constraints.
//!
//! The library combines regret-matching self-play with Lagrangian tilting of
//! counterfactual values: the constrained player's action values are shifted
//! by multiplier-weighted constraint subgradients, while the multipliers
//! themselves follow projected gradient ascent on the observed violations.
//! The average strategy pair converges to a saddle point of the constrained
//! minimax problem, and when the constraint set is infeasible it converges to
//! the least-infeasible strategies instead of diverging.
//!
//! Module map:
//!
//! - [`efg`] — game-tree representation, information sets, behavioral and
//!   sequence-form strategies, reach/utility evaluation.
//! - [`cfr`] — vanilla counterfactual regret minimization, best responses,
//!   and exploitability.
//! - [`solver`] — the constrained solver: tilted sweeps, multiplier updates,
//!   bound constants, and the solve/β-doubling drivers.
//! - [`constraints`] — concrete constraints: linear sequence-form bounds,
//!   transit risk bounds, Wilson-interval opponent-model constraints.
//! - [`games`] — built-in benchmarks: Kuhn poker, Leduc hold'em (plus a
//!   rank-bucket abstraction), and the grid transit pursuit game.
//! - [`lp`] — a dense sequence-form LP oracle with dual extraction, used as
//!   desk-scale ground truth.
//! - [`experiments`] — reproducible experiment runners behind the `ccfr`
//!   binary's subcommands.
//!
//! Each major capability has a runnable example under `examples/`; start with
//! `cargo run --release --example solve_kuhn`.

pub mod cfr;
pub mod constraints;
pub mod efg;
pub mod error;
pub mod experiments;
pub mod games;
pub mod lp;
pub mod solver;

pub use error::{Error, Result};
