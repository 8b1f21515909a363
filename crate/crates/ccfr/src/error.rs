//! Crate-wide error type.

use crate::efg::Player;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("player {0:?} has imperfect recall; sequence-form operations are undefined")]
    ImperfectRecall(Player),
    #[error("distribution does not sum to 1 (sum = {sum}, infoset `{infoset}`)")]
    BadDistribution { infoset: String, sum: f64 },
    #[error("unknown infoset `{0}`")]
    UnknownInfoset(String),
    #[error("unknown action `{action}` at infoset `{infoset}`")]
    UnknownAction { infoset: String, action: String },
    #[error("unknown abstraction `{0}`")]
    UnknownAbstraction(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("malformed game tree: {0}")]
    MalformedTree(String),
    #[error("sequence index {index} out of range (player has {len} sequences)")]
    SequenceOutOfRange { index: usize, len: usize },
    #[error("scale guard: {0}; pass the override flag to run anyway")]
    ScaleGuard(String),
    #[error("nonlinear constraint supplied where only linear constraints are supported")]
    NonlinearConstraint,
    #[error("observation log is empty")]
    EmptyLog,
    #[error("observation log does not match game (log hash {log}, game hash {game})")]
    LogGameMismatch { log: String, game: String },
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
